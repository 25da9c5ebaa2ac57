#include "optplan/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>

#include "optplan/combinatorial.hpp"
#include "optplan/error.hpp"

namespace optplan {

namespace {

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::kAMomi, "a-momi"},           {Method::kAMimo, "a-mimo"},
    {Method::kOptimalMimo, "optimal-mimo"}, {Method::kOptimalMomi, "optimal-momi"},
    {Method::kGreedy, "greedy"},          {Method::kBetweenness, "betweenness"},
    {Method::kEigen, "eigen"},
};

int ceil_log2(int k) {
  int r = 0;
  while ((1 << r) < k) ++r;
  return r;
}

/// Walks the size-`size` subsets of `pool` in lexicographic order, calling
/// `visit(chosen, L)` with L measured for `base` plus the subset. Stops early
/// when `visit` returns false.
template <typename Visit>
void for_each_subset(const PlanningContext& ctx, std::span<const State> base, std::span<const State> pool,
                     int size, Visit visit) {
  const int m = static_cast<int>(pool.size());
  if (size < 0 || size > m) return;
  std::vector<State> chosen;
  chosen.reserve(static_cast<std::size_t>(size));

  if (!ctx.deterministic()) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      chosen.assign(base.begin(), base.end());
      for (int i : idx) chosen.push_back(pool[static_cast<std::size_t>(i)]);
      const int L = ctx.measure(chosen);
      chosen.erase(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(base.size()));
      if (!visit(std::as_const(chosen), L)) return;
      int i = size - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - size + i) --i;
      if (i < 0) return;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  // Deterministic: per-state iteration is min(d'(s), 1 + min_c d(s, c)),
  // maintained incrementally down the recursion.
  const DistanceMatrix& dist = ctx.distances();
  const auto n = static_cast<std::size_t>(dist.n);
  std::vector<std::vector<int>> levels(static_cast<std::size_t>(size) + 1, std::vector<int>(n));
  levels[0] = ctx.no_option();
  for (State c : base)
    for (std::size_t s = 0; s < n; ++s) levels[0][s] = std::min(levels[0][s], 1 + dist.at(static_cast<State>(s), c));

  bool stop = false;
  auto recurse = [&](auto&& self, int start, int depth) -> void {
    if (stop) return;
    if (depth == size) {
      const auto& level = levels[static_cast<std::size_t>(depth)];
      const int L = *std::max_element(level.begin(), level.end());
      if (!visit(std::as_const(chosen), L)) stop = true;
      return;
    }
    for (int i = start; i <= m - (size - depth) && !stop; ++i) {
      const State c = pool[static_cast<std::size_t>(i)];
      const auto& prev = levels[static_cast<std::size_t>(depth)];
      auto& cur = levels[static_cast<std::size_t>(depth) + 1];
      for (std::size_t s = 0; s < n; ++s) cur[s] = std::min(prev[s], 1 + dist.at(static_cast<State>(s), c));
      chosen.push_back(c);
      self(self, i + 1, depth + 1);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0, 0);
}

std::vector<State> without(std::span<const State> pool, std::span<const State> taken) {
  std::vector<State> out;
  for (State s : pool)
    if (std::find(taken.begin(), taken.end(), s) == taken.end()) out.push_back(s);
  return out;
}

/// Best single addition to `base` (lowest state on ties).
State best_single(const PlanningContext& ctx, std::span<const State> base, std::span<const State> pool) {
  State pick = pool.front();
  int best = std::numeric_limits<int>::max();
  for_each_subset(ctx, base, pool, 1, [&](const std::vector<State>& c, int L) {
    if (L < best) {
      best = L;
      pick = c.front();
    }
    return true;
  });
  return pick;
}

}  // namespace

std::string_view method_name(Method m) {
  for (auto [method, name] : kMethodNames)
    if (method == m) return name;
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (auto [method, label] : kMethodNames)
    if (label == name) return method;
  return std::nullopt;
}

bool takes_ell(Method method) { return method == Method::kAMomi || method == Method::kOptimalMomi; }

std::vector<State> OptionSet::initiation_states() const {
  std::vector<State> out;
  for (const PointOption& o : options) out.push_back(o.init);
  return out;
}

std::string option_set_to_json(const OptionSet& set) {
  nlohmann::ordered_json j;
  j["method"] = std::string(method_name(set.method));
  j["options"] = nlohmann::ordered_json::array();
  for (const PointOption& o : set.options) j["options"].push_back({{"init", o.init}, {"term", o.term}});
  j["predicted_radius"] = set.predicted_radius ? nlohmann::ordered_json(*set.predicted_radius) : nlohmann::ordered_json();
  j["measured_L"] = set.measured_L;
  if (set.expand_fallback) j["expand_fallback"] = true;
  return j.dump(2);
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv("OPTPLAN_BUDGET")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return value;
  }
  return kDefaultBudget;
}

// ---------------------------------------------------------------------------

PlanningContext::PlanningContext(Mdp mdp, double epsilon, std::uint64_t budget)
    : mdp_(std::move(mdp)), epsilon_(epsilon), budget_(budget) {
  if (epsilon_ < 0.0) throw input_error("epsilon must be nonnegative");
  require_valid(mdp_);
  vstar_ = solve_optimal(mdp_, reference_tolerance(epsilon_));
  deterministic_ = mdp_.deterministic();
  no_option_ = value_iteration(mdp_, {}, epsilon_, vstar_).per_state_iteration;
  baseline_L_ = *std::max_element(no_option_.begin(), no_option_.end());
  for (State s = 0; s < mdp_.n_states; ++s)
    if (s != mdp_.goal) candidates_.push_back(s);
}

const DistanceMatrix& PlanningContext::distances() const {
  if (!distances_) distances_ = distance_matrix(mdp_, epsilon_, vstar_);
  return *distances_;
}

PointOption PlanningContext::option_to_goal(State init) const {
  return point_option_model(mdp_, vstar_, init, mdp_.goal);
}

std::vector<PointOption> PlanningContext::options_to_goal(std::span<const State> inits) const {
  std::vector<PointOption> out;
  out.reserve(inits.size());
  for (State s : inits) out.push_back(option_to_goal(s));
  return out;
}

int PlanningContext::measure(std::span<const State> inits) const {
  if (inits.empty()) return baseline_L_;
  if (!deterministic_) return measure_by_value_iteration(inits);
  const DistanceMatrix& dist = distances();
  int worst = 0;
  for (State s = 0; s < mdp_.n_states; ++s) {
    int value = no_option_[static_cast<std::size_t>(s)];
    for (State c : inits) value = std::min(value, 1 + dist.at(s, c));
    worst = std::max(worst, value);
  }
  return worst;
}

int PlanningContext::measure_by_value_iteration(std::span<const State> inits) const {
  const std::vector<PointOption> options = options_to_goal(inits);
  return value_iteration(mdp_, options, epsilon_, vstar_).iterations;
}

OptionSet PlanningContext::make_set(Method method, std::vector<State> inits) const {
  std::sort(inits.begin(), inits.end());
  inits.erase(std::unique(inits.begin(), inits.end()), inits.end());
  OptionSet set;
  set.method = method;
  set.options = options_to_goal(inits);
  set.measured_L = measure(inits);
  return set;
}

// ---------------------------------------------------------------------------

OptionSet a_momi(const PlanningContext& ctx, int ell) {
  if (ell < 1) throw input_error("a-momi: ell must be at least 1");
  const DistanceMatrix& dist = ctx.distances();
  const std::vector<State>& cands = ctx.candidates();

  SetCoverInstance inst;
  for (State s : cands)
    if (ctx.no_option()[static_cast<std::size_t>(s)] > ell) inst.universe.push_back(s);
  for (State c : cands) {
    std::vector<int> reach;
    for (State u : inst.universe)
      if (dist.at(u, c) <= ell - 1) reach.push_back(u);
    inst.subsets.push_back(std::move(reach));
  }
  for (State u : inst.universe) {
    const bool servable = std::any_of(cands.begin(), cands.end(), [&](State c) { return dist.at(u, c) + 1 <= ell; });
    if (!servable) throw infeasible_error("a-momi: state " + std::to_string(u) + " cannot converge within ell");
  }

  std::vector<State> centers;
  for (int j : greedy_set_cover(inst)) centers.push_back(cands[static_cast<std::size_t>(j)]);
  return ctx.make_set(Method::kAMomi, std::move(centers));
}

OptionSet a_mimo(const PlanningContext& ctx, int k) {
  if (k <= 0) throw input_error("a-mimo: k must be positive");
  const DistanceMatrix& dist = ctx.distances();
  const std::vector<State>& cands = ctx.candidates();
  if (cands.empty()) {
    OptionSet set = ctx.make_set(Method::kAMimo, {});
    set.predicted_radius = 0;
    return set;
  }

  KCenterInstance inst;
  inst.points = cands;
  inst.k = k;
  inst.dist.reserve(cands.size() * cands.size());
  for (State p : cands)
    for (State c : cands) inst.dist.push_back(dist.at(p, c));
  std::vector<State> chosen = asym_k_center(inst).centers;

  // Expand: add the best group of ceil(log2 k) options at a time.
  bool fallback = false;
  const int group = std::max(1, ceil_log2(k));
  while (static_cast<int>(chosen.size()) < k) {
    const std::vector<State> pool = without(cands, chosen);
    if (pool.empty()) break;
    const int r = std::min({group, k - static_cast<int>(chosen.size()), static_cast<int>(pool.size())});
    if (binomial(pool.size(), static_cast<std::uint64_t>(r)) > ctx.budget()) {
      fallback = true;
      while (static_cast<int>(chosen.size()) < k) {
        const std::vector<State> rest = without(cands, chosen);
        if (rest.empty()) break;
        chosen.push_back(best_single(ctx, chosen, rest));
      }
      break;
    }
    std::vector<State> best_group;
    int best = std::numeric_limits<int>::max();
    for_each_subset(ctx, chosen, pool, r, [&](const std::vector<State>& group_states, int L) {
      if (L < best) {
        best = L;
        best_group = group_states;
      }
      return true;
    });
    chosen.insert(chosen.end(), best_group.begin(), best_group.end());
  }

  OptionSet set = ctx.make_set(Method::kAMimo, chosen);
  set.predicted_radius = dist.radius(cands, set.initiation_states());
  set.expand_fallback = fallback;
  return set;
}

OptionSet optimal_mimo(const PlanningContext& ctx, int k) {
  if (k < 0) throw input_error("optimal-mimo: k must be nonnegative");
  const std::vector<State>& cands = ctx.candidates();
  const int m = static_cast<int>(cands.size());
  const int top = std::min(k, m);
  std::uint64_t total = 0;
  for (int j = 0; j <= top; ++j) {
    total += binomial(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(j));
    if (total > ctx.budget()) {
      throw budget_error("optimal-mimo: enumerating option sets of size <= " + std::to_string(k) +
                         " exceeds the budget of " + std::to_string(ctx.budget()) + "; use a-mimo instead");
    }
  }

  const int floor = ctx.measure(cands);
  std::vector<State> best_set;
  int best = ctx.baseline_L();
  for (int j = 1; j <= top && best > floor; ++j) {
    for_each_subset(ctx, {}, cands, j, [&](const std::vector<State>& c, int L) {
      if (L < best) {
        best = L;
        best_set = c;
      }
      return best > floor;
    });
  }
  return ctx.make_set(Method::kOptimalMimo, best_set);
}

OptionSet optimal_momi(const PlanningContext& ctx, int ell) {
  const std::vector<State>& cands = ctx.candidates();
  const int m = static_cast<int>(cands.size());
  if (ell < ctx.measure(cands)) {
    throw infeasible_error("optimal-momi: no option set reaches L <= " + std::to_string(ell));
  }
  std::uint64_t spent = 0;
  for (int j = 0; j <= m; ++j) {
    spent += binomial(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(j));
    if (spent > ctx.budget()) {
      throw budget_error("optimal-momi: option sets of size " + std::to_string(j) + " exceed the budget of " +
                         std::to_string(ctx.budget()) + "; use a-momi instead");
    }
    std::optional<std::vector<State>> found;
    if (j == 0) {
      if (ctx.baseline_L() <= ell) found.emplace();
    } else {
      for_each_subset(ctx, {}, cands, j, [&](const std::vector<State>& c, int L) {
        if (L <= ell) found = c;
        return !found;
      });
    }
    if (found) return ctx.make_set(Method::kOptimalMomi, *found);
  }
  throw infeasible_error("optimal-momi: no option set reaches L <= " + std::to_string(ell));
}

OptionSet greedy_mimo(const PlanningContext& ctx, int k) {
  if (k < 0) throw input_error("greedy: k must be nonnegative");
  std::vector<State> chosen;
  while (static_cast<int>(chosen.size()) < k) {
    const std::vector<State> pool = without(ctx.candidates(), chosen);
    if (pool.empty()) break;
    chosen.push_back(best_single(ctx, chosen, pool));
  }
  return ctx.make_set(Method::kGreedy, chosen);
}

OptionSet betweenness_options(const PlanningContext& ctx, int k) {
  if (k < 0) throw input_error("betweenness: k must be nonnegative");
  const std::vector<double> score = betweenness_centrality(transition_graph(ctx.mdp()));
  std::vector<State> ranked = ctx.candidates();
  std::stable_sort(ranked.begin(), ranked.end(), [&](State a, State b) {
    return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
  });
  ranked.resize(std::min(ranked.size(), static_cast<std::size_t>(k)));
  return ctx.make_set(Method::kBetweenness, ranked);
}

OptionSet eigenoptions(const PlanningContext& ctx, int k) {
  if (k < 0) throw input_error("eigen: k must be nonnegative");
  const Mdp& mdp = ctx.mdp();
  std::vector<State> subgoals;
  const int m = std::min(k, mdp.n_states - 1);
  if (m > 0) {
    for (const EigenPair& pair : laplacian_eigens(symmetrize(transition_graph(mdp)), m)) {
      State pick = -1;
      double best = -1.0;
      for (State s : ctx.candidates()) {
        const double magnitude = std::abs(pair.vector[static_cast<std::size_t>(s)]);
        if (magnitude > best + 1e-9) {
          best = magnitude;
          pick = s;
        }
      }
      if (pick >= 0 && std::find(subgoals.begin(), subgoals.end(), pick) == subgoals.end()) {
        subgoals.push_back(pick);
      }
    }
  }
  return ctx.make_set(Method::kEigen, subgoals);
}

OptionSet best_subset(const PlanningContext& ctx, const OptionSet& set) {
  const std::vector<State> inits = set.initiation_states();
  const int q = static_cast<int>(inits.size());
  if (q == 0) return set;
  if (q > 20) throw budget_error("best-subset evaluation limited to 20 options");
  std::vector<State> best_set;
  int best = std::numeric_limits<int>::max();
  for (int j = 1; j <= q; ++j) {
    for_each_subset(ctx, {}, inits, j, [&](const std::vector<State>& c, int L) {
      if (L < best) {
        best = L;
        best_set = c;
      }
      return true;
    });
  }
  OptionSet out = ctx.make_set(set.method, best_set);
  out.predicted_radius = set.predicted_radius;
  return out;
}

OptionSet discover(const PlanningContext& ctx, Method method, int param) {
  switch (method) {
    case Method::kAMomi: return a_momi(ctx, param);
    case Method::kAMimo: return a_mimo(ctx, param);
    case Method::kOptimalMimo: return optimal_mimo(ctx, param);
    case Method::kOptimalMomi: return optimal_momi(ctx, param);
    case Method::kGreedy: return greedy_mimo(ctx, param);
    case Method::kBetweenness: return betweenness_options(ctx, param);
    case Method::kEigen: return eigenoptions(ctx, param);
  }
  throw input_error("unknown method");
}

}  // namespace optplan
