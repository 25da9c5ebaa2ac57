#include "optplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "optplan/error.hpp"

namespace optplan {

namespace {

constexpr double kTieTolerance = 1e-9;

double stopping_threshold(double tolerance, double gamma) {
  return tolerance * (1.0 - gamma) / (2.0 * gamma);
}

double q_value(const Mdp& mdp, const std::vector<double>& v, State s, Action a) {
  double q = 0.0;
  for (const Transition& t : mdp.outcomes(s, a)) q += t.prob * v[static_cast<std::size_t>(t.next)];
  return mdp.reward(s, a) + mdp.gamma * q;
}

/// Options grouped by initiation state.
std::vector<std::vector<const PointOption*>> index_options(const Mdp& mdp,
                                                           std::span<const PointOption> options) {
  std::vector<std::vector<const PointOption*>> by_state(static_cast<std::size_t>(mdp.n_states));
  for (const PointOption& o : options) {
    if (o.init < 0 || o.init >= mdp.n_states || o.term < 0 || o.term >= mdp.n_states) {
      throw input_error("option state out of range");
    }
    by_state[static_cast<std::size_t>(o.init)].push_back(&o);
  }
  return by_state;
}

/// One synchronous Bellman sweep; returns the largest change.
double sweep(const Mdp& mdp, const std::vector<std::vector<const PointOption*>>& options,
             const std::vector<double>& in, std::vector<double>& out, std::optional<State> pinned) {
  double delta = 0.0;
  for (State s = 0; s < mdp.n_states; ++s) {
    const auto idx = static_cast<std::size_t>(s);
    if (pinned && *pinned == s) {
      out[idx] = in[idx];
      continue;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (Action a = 0; a < mdp.n_actions; ++a) best = std::max(best, q_value(mdp, in, s, a));
    for (const PointOption* o : options[idx]) {
      best = std::max(best, o->discounted_reward + o->term_discount * in[static_cast<std::size_t>(o->term)]);
    }
    out[idx] = best;
    delta = std::max(delta, std::abs(best - in[idx]));
  }
  return delta;
}

ConvergenceResult run_to_convergence(const Mdp& mdp, std::span<const PointOption> options, double epsilon,
                                     const ValueFunction& vstar, const std::vector<double>& v0,
                                     std::optional<State> pinned, int max_iterations) {
  if (epsilon < 0.0) throw input_error("epsilon must be nonnegative");
  if (static_cast<int>(vstar.values.size()) != mdp.n_states) throw input_error("V* has the wrong size");
  const auto n = static_cast<std::size_t>(mdp.n_states);
  if (!v0.empty() && v0.size() != n) throw input_error("initial value function has the wrong size");

  const auto by_state = index_options(mdp, options);
  std::vector<double> current = v0.empty() ? std::vector<double>(n, 0.0) : v0;
  if (pinned) current[static_cast<std::size_t>(*pinned)] = vstar[*pinned];
  std::vector<double> next(n, 0.0);
  std::vector<int> last_bad(n, -1);
  const double stop = stopping_threshold(reference_tolerance(epsilon), mdp.gamma);

  for (int i = 0;; ++i) {
    bool all_optimal = true;
    for (std::size_t s = 0; s < n; ++s) {
      if (!is_eps_optimal(current[s], vstar.values[s], epsilon)) {
        last_bad[s] = i;
        all_optimal = false;
      }
    }
    if (i >= max_iterations) {
      throw Error(ErrorKind::kConvergence,
                  "value iteration did not converge within " + std::to_string(max_iterations) + " sweeps");
    }
    const double delta = sweep(mdp, by_state, current, next, pinned);
    if (all_optimal && delta <= stop) {
      ConvergenceResult result;
      result.per_state_iteration.resize(n);
      for (std::size_t s = 0; s < n; ++s) result.per_state_iteration[s] = last_bad[s] + 1;
      result.iterations = *std::max_element(result.per_state_iteration.begin(), result.per_state_iteration.end());
      result.value = {std::move(next), i + 1};
      return result;
    }
    current.swap(next);
  }
}

}  // namespace

double reference_tolerance(double epsilon) {
  return epsilon > 0.0 ? std::min(1e-10, epsilon / 10.0) : 1e-13;
}

bool is_eps_optimal(double value, double optimal, double epsilon) {
  const double gap = std::abs(value - optimal);
  return epsilon > 0.0 ? gap < epsilon : gap <= kExactTolerance;
}

ValueFunction solve_optimal(const Mdp& mdp, double tolerance, int max_iterations) {
  if (!(tolerance > 0.0)) throw input_error("solve tolerance must be positive");
  const auto n = static_cast<std::size_t>(mdp.n_states);
  const std::vector<std::vector<const PointOption*>> no_options(n);
  const double stop = stopping_threshold(tolerance, mdp.gamma);
  std::vector<double> current(n, 0.0), next(n, 0.0);
  double delta = 0.0;
  for (int i = 0; i < max_iterations; ++i) {
    delta = sweep(mdp, no_options, current, next, std::nullopt);
    current.swap(next);
    if (delta < stop || delta == 0.0) return {std::move(current), i + 1};
  }
  std::ostringstream msg;
  msg << "solve_optimal did not converge within " << max_iterations << " sweeps (residual " << delta << ")";
  throw Error(ErrorKind::kConvergence, msg.str());
}

std::vector<Action> greedy_policy(const Mdp& mdp, const ValueFunction& vstar) {
  std::vector<Action> policy(static_cast<std::size_t>(mdp.n_states), 0);
  for (State s = 0; s < mdp.n_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (Action a = 0; a < mdp.n_actions; ++a) best = std::max(best, q_value(mdp, vstar.values, s, a));
    const double slack = kTieTolerance * std::max(1.0, std::abs(best));
    for (Action a = 0; a < mdp.n_actions; ++a) {
      if (q_value(mdp, vstar.values, s, a) >= best - slack) {
        policy[static_cast<std::size_t>(s)] = a;
        break;
      }
    }
  }
  return policy;
}

PointOption point_option_model(const Mdp& mdp, const ValueFunction& vstar, State init, State term) {
  if (init < 0 || init >= mdp.n_states || term < 0 || term >= mdp.n_states) {
    throw input_error("point option state out of range");
  }
  if (init == term) throw input_error("point option needs distinct initiation and termination states");

  const std::vector<Action> policy = greedy_policy(mdp, vstar);
  const auto n = static_cast<std::size_t>(mdp.n_states);

  std::vector<bool> seen(n, false);
  std::deque<State> queue{init};
  seen[static_cast<std::size_t>(init)] = true;
  bool reaches = false;
  while (!queue.empty() && !reaches) {
    const State s = queue.front();
    queue.pop_front();
    for (const Transition& t : mdp.outcomes(s, policy[static_cast<std::size_t>(s)])) {
      if (t.prob <= 0.0) continue;
      if (t.next == term) {
        reaches = true;
        break;
      }
      if (!seen[static_cast<std::size_t>(t.next)]) {
        seen[static_cast<std::size_t>(t.next)] = true;
        queue.push_back(t.next);
      }
    }
  }
  if (!reaches) {
    throw infeasible_error("option " + std::to_string(init) + " -> " + std::to_string(term) +
                           " never terminates under the optimal policy");
  }

  // Policy evaluation with absorption at `term`: reward-to-termination and
  // the expected discount at termination.
  std::vector<double> reward(n, 0.0), discount(n, 0.0), next_reward(n), next_discount(n);
  for (int i = 0; i < kDefaultIterationCap; ++i) {
    double delta = 0.0;
    for (State s = 0; s < mdp.n_states; ++s) {
      const auto idx = static_cast<std::size_t>(s);
      const Action a = policy[idx];
      double r = 0.0, d = 0.0;
      for (const Transition& t : mdp.outcomes(s, a)) {
        if (t.next == term) {
          d += t.prob;
        } else {
          r += t.prob * reward[static_cast<std::size_t>(t.next)];
          d += t.prob * discount[static_cast<std::size_t>(t.next)];
        }
      }
      next_reward[idx] = mdp.reward(s, a) + mdp.gamma * r;
      next_discount[idx] = mdp.gamma * d;
      delta = std::max({delta, std::abs(next_reward[idx] - reward[idx]), std::abs(next_discount[idx] - discount[idx])});
    }
    reward.swap(next_reward);
    discount.swap(next_discount);
    if (delta <= 1e-14) {
      const auto idx = static_cast<std::size_t>(init);
      return {init, term, reward[idx], discount[idx]};
    }
  }
  throw Error(ErrorKind::kConvergence, "option model evaluation did not converge");
}

ConvergenceResult value_iteration(const Mdp& mdp, std::span<const PointOption> options, double epsilon,
                                  const ValueFunction& vstar, const std::vector<double>& v0,
                                  int max_iterations) {
  return run_to_convergence(mdp, options, epsilon, vstar, v0, std::nullopt, max_iterations);
}

ConvergenceResult value_iteration(const Mdp& mdp, std::span<const PointOption> options, double epsilon,
                                  const std::vector<double>& v0) {
  const ValueFunction vstar = solve_optimal(mdp, reference_tolerance(epsilon));
  return value_iteration(mdp, options, epsilon, vstar, v0);
}

ConvergenceResult pinned_value_iteration(const Mdp& mdp, double epsilon, const ValueFunction& vstar,
                                         State pinned, int max_iterations) {
  if (pinned < 0 || pinned >= mdp.n_states) throw input_error("pinned state out of range");
  return run_to_convergence(mdp, {}, epsilon, vstar, {}, pinned, max_iterations);
}

}  // namespace optplan
