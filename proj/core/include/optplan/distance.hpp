#pragma once

#include <span>
#include <vector>

#include "optplan/mdp.hpp"
#include "optplan/planner.hpp"

namespace optplan {

/// Asymmetric convergence distance between states.
///
/// `at(s, t)` is the number of sweeps, after `t` has reached its optimal
/// value, that `s` needs to become eps-optimal and stay so, capped at
/// `no_option[s] - 1` (and floored at 0). `no_option[s]` is the per-state
/// iteration count of plain value iteration from zero.
struct DistanceMatrix {
  int n = 0;
  std::vector<int> d;          // row-major n x n
  std::vector<int> no_option;  // d'(s)

  int at(State s, State t) const {
    return d[static_cast<std::size_t>(s) * static_cast<std::size_t>(n) + static_cast<std::size_t>(t)];
  }

  /// max over `points` of min over `centers` of at(point, center).
  int radius(std::span<const State> points, std::span<const State> centers) const;
};

/// Per-state iteration counts of option-free value iteration from V0 = 0.
std::vector<int> distance_no_options(const Mdp& mdp, double epsilon);
std::vector<int> distance_no_options(const Mdp& mdp, double epsilon, const ValueFunction& vstar);

/// Full matrix, one pinned value-iteration run per pivot state.
DistanceMatrix distance_matrix(const Mdp& mdp, double epsilon);
DistanceMatrix distance_matrix(const Mdp& mdp, double epsilon, const ValueFunction& vstar);

}  // namespace optplan
