#pragma once

#include <optional>
#include <span>
#include <vector>

#include "optplan/mdp.hpp"

namespace optplan {

/// Dense value table plus the sweep index that produced it.
struct ValueFunction {
  std::vector<double> values;
  int iteration = 0;

  double operator[](State s) const { return values[static_cast<std::size_t>(s)]; }
};

/// Option with one initiation and one termination state, carried as its
/// multi-time model: backing it up at `init` yields
/// `discounted_reward + term_discount * V(term)`.
struct PointOption {
  State init = 0;
  State term = 0;
  double discounted_reward = 0.0;
  double term_discount = 0.0;  // E[gamma^duration]; gamma^k when deterministic
};

struct ConvergenceResult {
  ValueFunction value;
  int iterations = 0;  // L: first sweep after which every state stays eps-optimal
  std::vector<int> per_state_iteration;
};

inline constexpr int kDefaultIterationCap = 200000;
inline constexpr double kDefaultEpsilon = 1e-6;

/// Exact-equality threshold used when epsilon is 0.
inline constexpr double kExactTolerance = 1e-12;

/// Accuracy of the reference V* used to measure convergence:
/// min(1e-10, eps/10), or a near machine-precision target when eps is 0.
double reference_tolerance(double epsilon);

/// |value - optimal| < eps, or within kExactTolerance when eps is 0.
bool is_eps_optimal(double value, double optimal, double epsilon);

/// Synchronous value iteration from zero, stopped once successive sweeps
/// differ by less than tolerance * (1 - gamma) / (2 * gamma) everywhere.
/// Throws a convergence error carrying the residual when the cap is hit.
ValueFunction solve_optimal(const Mdp& mdp, double tolerance,
                            int max_iterations = kDefaultIterationCap);

/// Greedy policy with respect to `vstar`; ties go to the lowest action.
std::vector<Action> greedy_policy(const Mdp& mdp, const ValueFunction& vstar);

/// Multi-time model of the point option (init -> term) that follows the
/// greedy optimal policy and terminates on first arrival at `term`.
PointOption point_option_model(const Mdp& mdp, const ValueFunction& vstar, State init, State term);

/// Synchronous value iteration over primitive actions plus `options`,
/// started from `v0` (all zeros when empty), measured against `vstar`.
/// Returns L and the per-state iteration after which each state is
/// eps-optimal and stays so.
ConvergenceResult value_iteration(const Mdp& mdp, std::span<const PointOption> options, double epsilon,
                                  const ValueFunction& vstar, const std::vector<double>& v0 = {},
                                  int max_iterations = kDefaultIterationCap);

/// Same, computing the reference V* internally.
ConvergenceResult value_iteration(const Mdp& mdp, std::span<const PointOption> options, double epsilon,
                                  const std::vector<double>& v0 = {});

/// Value iteration with `pinned` held at vstar(pinned) on every sweep,
/// including the initial one. No options.
ConvergenceResult pinned_value_iteration(const Mdp& mdp, double epsilon, const ValueFunction& vstar,
                                         State pinned, int max_iterations = kDefaultIterationCap);

}  // namespace optplan
