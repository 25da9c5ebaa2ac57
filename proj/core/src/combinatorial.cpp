#include "optplan/combinatorial.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>

#include "optplan/error.hpp"

namespace optplan {

namespace {

/// Subsets re-expressed over element positions 0..|U|-1.
std::vector<std::vector<int>> positional_subsets(const SetCoverInstance& inst) {
  std::map<int, int> position;
  for (int u : inst.universe) position.emplace(u, static_cast<int>(position.size()));
  if (position.size() != inst.universe.size()) throw input_error("set cover: duplicate universe element");
  std::vector<std::vector<int>> out;
  out.reserve(inst.subsets.size());
  for (std::size_t j = 0; j < inst.subsets.size(); ++j) {
    std::set<int> members;
    for (int u : inst.subsets[j]) {
      auto it = position.find(u);
      if (it == position.end()) {
        throw input_error("set cover: subset " + std::to_string(j) + " has element " + std::to_string(u) +
                          " outside the universe");
      }
      members.insert(it->second);
    }
    out.emplace_back(members.begin(), members.end());
  }
  return out;
}

void require_coverable(const SetCoverInstance& inst, const std::vector<std::vector<int>>& sets) {
  std::vector<bool> hit(inst.universe.size(), false);
  for (const auto& s : sets)
    for (int e : s) hit[static_cast<std::size_t>(e)] = true;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (!hit[i]) throw infeasible_error("set cover: element " + std::to_string(inst.universe[i]) + " is in no subset");
  }
}

/// Greedy cover of `targets` by the sets returned by `members(c)` for
/// candidate c in [0, candidates). Returns nullopt if something is left
/// uncovered.
template <typename Members>
std::optional<std::vector<int>> greedy_cover(std::vector<bool> uncovered, int candidates, Members members) {
  std::size_t left = static_cast<std::size_t>(std::count(uncovered.begin(), uncovered.end(), true));
  std::vector<int> chosen;
  while (left > 0) {
    int best = -1;
    std::size_t best_gain = 0;
    for (int c = 0; c < candidates; ++c) {
      std::size_t gain = 0;
      for (int e : members(c)) gain += uncovered[static_cast<std::size_t>(e)] ? 1 : 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best < 0) return std::nullopt;
    chosen.push_back(best);
    for (int e : members(best)) {
      if (uncovered[static_cast<std::size_t>(e)]) {
        uncovered[static_cast<std::size_t>(e)] = false;
        --left;
      }
    }
  }
  return chosen;
}

/// Advances `idx` (sorted, values < n) to the next k-combination.
bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

}  // namespace

std::vector<int> greedy_set_cover(const SetCoverInstance& inst) {
  const auto sets = positional_subsets(inst);
  require_coverable(inst, sets);
  auto chosen = greedy_cover(std::vector<bool>(inst.universe.size(), true), static_cast<int>(sets.size()),
                             [&](int c) -> const std::vector<int>& { return sets[static_cast<std::size_t>(c)]; });
  return *chosen;
}

bool covers(const SetCoverInstance& inst, const std::vector<int>& chosen) {
  const auto sets = positional_subsets(inst);
  std::vector<bool> hit(inst.universe.size(), false);
  for (int j : chosen) {
    if (j < 0 || j >= static_cast<int>(sets.size())) return false;
    for (int e : sets[static_cast<std::size_t>(j)]) hit[static_cast<std::size_t>(e)] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

std::vector<int> brute_force_set_cover(const SetCoverInstance& inst, int max_subsets) {
  const int m = static_cast<int>(inst.subsets.size());
  if (m > max_subsets) {
    throw budget_error("brute-force set cover limited to " + std::to_string(max_subsets) + " subsets");
  }
  const auto sets = positional_subsets(inst);
  require_coverable(inst, sets);
  const std::size_t words = (inst.universe.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> masks(sets.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t j = 0; j < sets.size(); ++j)
    for (int e : sets[j]) masks[j][static_cast<std::size_t>(e) / 64] |= std::uint64_t{1} << (e % 64);
  std::vector<std::uint64_t> full(words, 0);
  for (std::size_t e = 0; e < inst.universe.size(); ++e) full[e / 64] |= std::uint64_t{1} << (e % 64);

  for (int size = 0; size <= m; ++size) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    std::iota(idx.begin(), idx.end(), 0);
    do {
      std::vector<std::uint64_t> acc(words, 0);
      for (int j : idx)
        for (std::size_t w = 0; w < words; ++w) acc[w] |= masks[static_cast<std::size_t>(j)][w];
      if (acc == full) return idx;
    } while (next_combination(idx, m));
  }
  throw infeasible_error("set cover: no cover exists");
}

// ---------------------------------------------------------------------------

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = n - k + i;
    // result * factor / i is exact; guard the multiplication.
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) return std::numeric_limits<std::uint64_t>::max();
    result = result * factor / i;
  }
  return result;
}

int k_center_objective(const KCenterInstance& inst, const std::vector<int>& center_positions) {
  int worst = 0;
  for (int p = 0; p < inst.size(); ++p) {
    int best = std::numeric_limits<int>::max();
    for (int c : center_positions) best = std::min(best, inst.at(p, c));
    worst = std::max(worst, best);
  }
  return worst;
}

bool satisfies_triangle_inequality(const KCenterInstance& inst) {
  const int m = inst.size();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        if (inst.at(a, c) > inst.at(a, b) + inst.at(b, c)) return false;
  return true;
}

namespace {

class KCenterSolver {
 public:
  explicit KCenterSolver(const KCenterInstance& inst) : inst_(inst), m_(inst.size()) {}

  /// Centers (positions) serving every point at radius r in some number of
  /// cover rounds, or nullopt when more than k are needed.
  std::optional<std::vector<int>> attempt(int r) const {
    auto direct = greedy_cover(std::vector<bool>(static_cast<std::size_t>(m_), true), m_,
                               [&](int c) { return served_by(c, r); });
    if (direct && static_cast<int>(direct->size()) <= inst_.k) return direct;
    return capture_and_reduce(r);
  }

 private:
  std::vector<int> served_by(int c, int r) const {
    std::vector<int> out;
    for (int p = 0; p < m_; ++p)
      if (inst_.at(p, c) <= r) out.push_back(p);
    return out;
  }

  /// Every center of v within r is served by v within r.
  bool center_capturing(int v, int r) const {
    for (int u = 0; u < m_; ++u)
      if (inst_.at(v, u) <= r && inst_.at(u, v) > r) return false;
    return true;
  }

  std::optional<std::vector<int>> capture_and_reduce(int r) const {
    std::vector<bool> uncovered(static_cast<std::size_t>(m_), true);
    std::vector<int> centers;
    for (;;) {
      int pick = -1;
      for (int v = 0; v < m_ && pick < 0; ++v)
        if (uncovered[static_cast<std::size_t>(v)] && center_capturing(v, r)) pick = v;
      if (pick < 0) break;
      centers.push_back(pick);
      if (static_cast<int>(centers.size()) > inst_.k) return std::nullopt;
      // Clear everything within two hops of the pick.
      for (int u : served_by(pick, r)) {
        uncovered[static_cast<std::size_t>(u)] = false;
        for (int p : served_by(u, r)) uncovered[static_cast<std::size_t>(p)] = false;
      }
    }

    const int budget = inst_.k - static_cast<int>(centers.size());
    if (std::none_of(uncovered.begin(), uncovered.end(), [](bool b) { return b; })) return centers;
    if (budget <= 0) return std::nullopt;

    // Recursively cover the previous round's centers until the set fits.
    std::vector<bool> targets = uncovered;
    std::size_t target_count = static_cast<std::size_t>(std::count(targets.begin(), targets.end(), true));
    for (;;) {
      auto round = greedy_cover(targets, m_, [&](int c) { return served_by(c, r); });
      if (!round) return std::nullopt;
      if (static_cast<int>(round->size()) <= budget) {
        centers.insert(centers.end(), round->begin(), round->end());
        return centers;
      }
      if (round->size() >= target_count) return std::nullopt;
      targets.assign(static_cast<std::size_t>(m_), false);
      for (int c : *round) targets[static_cast<std::size_t>(c)] = true;
      target_count = round->size();
    }
  }

  const KCenterInstance& inst_;
  int m_;
};

KCenterResult make_result(const KCenterInstance& inst, std::vector<int> positions) {
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  KCenterResult out;
  out.radius = k_center_objective(inst, positions);
  for (int c : positions) out.centers.push_back(inst.points[static_cast<std::size_t>(c)]);
  std::sort(out.centers.begin(), out.centers.end());
  return out;
}

void check_instance(const KCenterInstance& inst) {
  if (inst.k <= 0) throw input_error("k-center: k must be positive");
  if (inst.dist.size() != inst.points.size() * inst.points.size()) {
    throw input_error("k-center: distance matrix does not match the point count");
  }
}

}  // namespace

KCenterResult asym_k_center(const KCenterInstance& inst) {
  check_instance(inst);
  const int m = inst.size();
  const bool triangle = satisfies_triangle_inequality(inst);
  if (m == 0) return {{}, 0, triangle};
  if (inst.k >= m) {
    std::vector<int> all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), 0);
    KCenterResult out = make_result(inst, all);
    out.triangle_inequality = triangle;
    return out;
  }

  std::vector<int> radii(inst.dist.begin(), inst.dist.end());
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  const KCenterSolver solver(inst);
  std::optional<KCenterResult> best;
  auto consider = [&](const std::vector<int>& positions) {
    KCenterResult candidate = make_result(inst, positions);
    if (!best || std::tie(candidate.radius, candidate.centers) < std::tie(best->radius, best->centers)) {
      best = std::move(candidate);
    }
  };

  // Neither acceptance nor the achieved radius is monotone in r, so try
  // every distinct radius and keep the best set found.
  for (int r : radii)
    if (auto centers = solver.attempt(r)) consider(*centers);
  if (!best) throw Error(ErrorKind::kInfeasible, "k-center: no radius accepted");
  best->triangle_inequality = triangle;
  return *best;
}

KCenterResult brute_force_k_center(const KCenterInstance& inst, std::uint64_t cap) {
  check_instance(inst);
  const int m = inst.size();
  const int k = std::min(inst.k, m);
  if (binomial(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k)) > cap) {
    throw budget_error("brute-force k-center: C(" + std::to_string(m) + ", " + std::to_string(k) +
                       ") exceeds the cap");
  }
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> best_idx = idx;
  int best = std::numeric_limits<int>::max();
  do {
    const int value = k_center_objective(inst, idx);
    if (value < best) {
      best = value;
      best_idx = idx;
    }
  } while (next_combination(idx, m));
  KCenterResult out = make_result(inst, best_idx);
  out.triangle_inequality = satisfies_triangle_inequality(inst);
  return out;
}

// ---------------------------------------------------------------------------

Digraph transition_graph(const Mdp& mdp) {
  Digraph g;
  g.n = mdp.n_states;
  g.adj.resize(static_cast<std::size_t>(g.n));
  for (State s = 0; s < mdp.n_states; ++s) {
    std::set<int> next;
    for (Action a = 0; a < mdp.n_actions; ++a)
      for (const Transition& t : mdp.outcomes(s, a))
        if (t.prob > 0.0 && t.next != s) next.insert(t.next);
    g.adj[static_cast<std::size_t>(s)].assign(next.begin(), next.end());
  }
  return g;
}

Digraph symmetrize(const Digraph& g) {
  std::vector<std::set<int>> sets(static_cast<std::size_t>(g.n));
  for (int u = 0; u < g.n; ++u) {
    for (int v : g.adj[static_cast<std::size_t>(u)]) {
      if (u == v) continue;
      sets[static_cast<std::size_t>(u)].insert(v);
      sets[static_cast<std::size_t>(v)].insert(u);
    }
  }
  Digraph out;
  out.n = g.n;
  for (const auto& s : sets) out.adj.emplace_back(s.begin(), s.end());
  return out;
}

std::vector<double> betweenness_centrality(const Digraph& g) {
  const auto n = static_cast<std::size_t>(g.n);
  std::vector<double> centrality(n, 0.0);
  std::vector<double> sigma(n), delta(n);
  std::vector<int> dist(n);
  std::vector<std::vector<int>> preds(n);
  std::vector<int> order;
  order.reserve(n);

  for (int source = 0; source < g.n; ++source) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    for (auto& p : preds) p.clear();
    order.clear();

    sigma[static_cast<std::size_t>(source)] = 1.0;
    dist[static_cast<std::size_t>(source)] = 0;
    std::deque<int> queue{source};
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (int w : g.adj[static_cast<std::size_t>(v)]) {
        auto& dw = dist[static_cast<std::size_t>(w)];
        if (dw < 0) {
          dw = dist[static_cast<std::size_t>(v)] + 1;
          queue.push_back(w);
        }
        if (dw == dist[static_cast<std::size_t>(v)] + 1) {
          sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
          preds[static_cast<std::size_t>(w)].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto w = static_cast<std::size_t>(*it);
      for (int v : preds[w]) {
        const auto vi = static_cast<std::size_t>(v);
        delta[vi] += sigma[vi] / sigma[w] * (1.0 + delta[w]);
      }
      if (*it != source) centrality[w] += delta[w];
    }
  }
  return centrality;
}

std::vector<EigenPair> symmetric_eigen(std::vector<double> a, int n) {
  const auto N = static_cast<std::size_t>(n);
  if (a.size() != N * N) throw input_error("eigen: matrix size mismatch");
  std::vector<double> v(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) v[i * N + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * N + j]; };

  double scale = 0.0;
  for (double x : a) scale += x * x;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) off += A(p, q) * A(p, q);
    if (off <= 1e-32 * scale || off == 0.0) break;

    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < N; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        A(p, q) = A(q, p) = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
          const double vkp = v[k * N + p], vkq = v[k * N + q];
          v[k * N + p] = c * vkp - s * vkq;
          v[k * N + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<EigenPair> pairs(N);
  for (std::size_t j = 0; j < N; ++j) {
    pairs[j].value = A(j, j);
    pairs[j].vector.resize(N);
    double norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) norm += v[i * N + j] * v[i * N + j];
    norm = std::sqrt(norm);
    double sign = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (std::abs(v[i * N + j]) > 1e-12) {
        sign = v[i * N + j] > 0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < N; ++i) pairs[j].vector[i] = sign * v[i * N + j] / norm;
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& x, const EigenPair& y) { return x.value < y.value; });
  return pairs;
}

std::vector<EigenPair> laplacian_eigens(const Digraph& g, int m) {
  if (m < 0 || m >= g.n) throw input_error("laplacian: need 0 <= m < n");
  const auto N = static_cast<std::size_t>(g.n);

  std::vector<bool> seen(N, false);
  std::deque<int> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int w : g.adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++reached;
        queue.push_back(w);
      }
    }
  }
  if (reached != N) throw input_error("laplacian: graph is disconnected");

  std::vector<double> lap(N * N, 0.0);
  for (std::size_t u = 0; u < N; ++u) {
    for (int w : g.adj[u]) {
      const auto wi = static_cast<std::size_t>(w);
      if (wi == u) continue;
      lap[u * N + wi] = -1.0;
      lap[wi * N + u] = -1.0;
    }
  }
  for (std::size_t u = 0; u < N; ++u) {
    double degree = 0.0;
    for (std::size_t w = 0; w < N; ++w) degree -= lap[u * N + w];
    lap[u * N + u] = degree;
  }
  std::vector<EigenPair> pairs = symmetric_eigen(std::move(lap), g.n);
  return {pairs.begin() + 1, pairs.begin() + 1 + m};
}

}  // namespace optplan
