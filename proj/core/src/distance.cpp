#include "optplan/distance.hpp"

#include <algorithm>
#include <limits>

#include "optplan/error.hpp"

namespace optplan {

int DistanceMatrix::radius(std::span<const State> points, std::span<const State> centers) const {
  int worst = 0;
  for (State p : points) {
    int best = std::numeric_limits<int>::max();
    for (State c : centers) best = std::min(best, at(p, c));
    if (centers.empty()) best = std::numeric_limits<int>::max();
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<int> distance_no_options(const Mdp& mdp, double epsilon, const ValueFunction& vstar) {
  return value_iteration(mdp, {}, epsilon, vstar).per_state_iteration;
}

std::vector<int> distance_no_options(const Mdp& mdp, double epsilon) {
  require_valid(mdp);
  return distance_no_options(mdp, epsilon, solve_optimal(mdp, reference_tolerance(epsilon)));
}

DistanceMatrix distance_matrix(const Mdp& mdp, double epsilon, const ValueFunction& vstar) {
  DistanceMatrix out;
  out.n = mdp.n_states;
  const auto n = static_cast<std::size_t>(mdp.n_states);
  out.no_option = distance_no_options(mdp, epsilon, vstar);
  out.d.assign(n * n, 0);
  for (State pivot = 0; pivot < mdp.n_states; ++pivot) {
    const ConvergenceResult pinned = pinned_value_iteration(mdp, epsilon, vstar, pivot);
    for (std::size_t s = 0; s < n; ++s) {
      const int capped = std::min(out.no_option[s] - 1, pinned.per_state_iteration[s]);
      out.d[s * n + static_cast<std::size_t>(pivot)] = std::max(0, capped);
    }
  }
  return out;
}

DistanceMatrix distance_matrix(const Mdp& mdp, double epsilon) {
  require_valid(mdp);
  return distance_matrix(mdp, epsilon, solve_optimal(mdp, reference_tolerance(epsilon)));
}

}  // namespace optplan
