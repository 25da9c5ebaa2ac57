#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optplan/distance.hpp"
#include "optplan/mdp.hpp"
#include "optplan/planner.hpp"

namespace optplan {

enum class Method { kAMomi, kAMimo, kOptimalMimo, kOptimalMomi, kGreedy, kBetweenness, kEigen };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

/// Discovered options (all terminating at the goal) and the measured
/// iteration count L with them added.
struct OptionSet {
  Method method = Method::kAMimo;
  std::vector<PointOption> options;
  std::optional<int> predicted_radius;  // P(C) over the initiation states, A-MIMO only
  int measured_L = 0;
  bool expand_fallback = false;  // Expand ran out of budget and finished greedily

  std::vector<State> initiation_states() const;
};

/// {method, options:[{init, term}], predicted_radius, measured_L}
std::string option_set_to_json(const OptionSet& set);

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

/// Enumeration cap: OPTPLAN_BUDGET when set to a positive integer, else
/// kDefaultBudget.
std::uint64_t default_budget();

/// Shared per-MDP state for the discovery algorithms: V*, the option-free
/// iteration counts and (lazily) the distance matrix. Measuring L for a set
/// of goal-terminating options uses the distance matrix on deterministic
/// MDPs, where L(O) = max_s min(d'(s), 1 + min_{c in O} d(s, c)), and full
/// value iteration otherwise.
class PlanningContext {
 public:
  PlanningContext(Mdp mdp, double epsilon, std::uint64_t budget = default_budget());

  const Mdp& mdp() const { return mdp_; }
  double epsilon() const { return epsilon_; }
  std::uint64_t budget() const { return budget_; }
  const ValueFunction& vstar() const { return vstar_; }
  bool deterministic() const { return deterministic_; }

  /// Option-free per-state iteration counts d'(s).
  const std::vector<int>& no_option() const { return no_option_; }
  int baseline_L() const { return baseline_L_; }

  const DistanceMatrix& distances() const;

  /// Candidate initiation states: every state but the goal.
  const std::vector<State>& candidates() const { return candidates_; }

  PointOption option_to_goal(State init) const;
  std::vector<PointOption> options_to_goal(std::span<const State> inits) const;

  /// L with point options init -> goal for every listed state.
  int measure(std::span<const State> inits) const;

  /// Same, always by full value iteration.
  int measure_by_value_iteration(std::span<const State> inits) const;

  OptionSet make_set(Method method, std::vector<State> inits) const;

 private:
  Mdp mdp_;
  double epsilon_;
  std::uint64_t budget_;
  ValueFunction vstar_;
  bool deterministic_;
  std::vector<int> no_option_;
  int baseline_L_ = 0;
  std::vector<State> candidates_;
  mutable std::optional<DistanceMatrix> distances_;
};

/// Set-cover based: fewest options found so that L <= ell.
OptionSet a_momi(const PlanningContext& ctx, int ell);

/// Asymmetric k-center based: k options minimizing L, padded by Expand.
OptionSet a_mimo(const PlanningContext& ctx, int k);

/// Exhaustive search over goal-terminating option sets of size <= k.
OptionSet optimal_mimo(const PlanningContext& ctx, int k);

/// Smallest goal-terminating option set with L <= ell (sizes 0, 1, ...).
OptionSet optimal_momi(const PlanningContext& ctx, int ell);

/// One option at a time, each minimizing the resulting L.
OptionSet greedy_mimo(const PlanningContext& ctx, int k);

/// Top-k states by shortest-path betweenness on the transition graph.
OptionSet betweenness_options(const PlanningContext& ctx, int k);

/// Subgoals at the max-|component| states of the k lowest nonconstant
/// Laplacian eigenvectors of the symmetrized transition graph.
OptionSet eigenoptions(const PlanningContext& ctx, int k);

/// Nonempty subset of `set`'s options with the smallest L (fewest options,
/// then lexicographic, on ties). Returns `set` unchanged when it is empty.
OptionSet best_subset(const PlanningContext& ctx, const OptionSet& set);

/// Dispatch by method; `param` is k for MIMO-style methods and ell for
/// MOMI-style ones.
OptionSet discover(const PlanningContext& ctx, Method method, int param);

/// True for methods parameterized by ell rather than k.
bool takes_ell(Method method);

}  // namespace optplan
