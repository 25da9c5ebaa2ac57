#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optplan/mdp.hpp"

namespace optplan {

/// A named instance, with the grid layout when it came from a map.
struct Domain {
  std::string name;
  Mdp mdp;
  std::optional<GridWorld> grid;
  std::vector<std::string> state_names;
};

/// Built-in domains: fig3, fig6, fig7, fourroom, grid9, goal-only.
std::vector<std::string> builtin_domain_names();

/// Looks up a built-in domain; `gamma` overrides its default discount.
/// Throws an input error for unknown names.
Domain load_builtin(const std::string& name, std::optional<double> gamma = std::nullopt);

/// Wraps a grid world, naming states by cell as "r<row>c<col>".
Domain grid_domain(std::string name, GridWorld world);

/// Names states "s0", "s1", ... with the goal named "g".
std::vector<std::string> default_state_names(const Mdp& mdp);

// The individual constructions.
Mdp fig3_chain(double gamma = 0.9);
Mdp fig6_stochastic(double gamma = 0.9);
Mdp fig7_two_arms(double gamma = 0.9);
GridWorld grid9_world(double gamma = 0.95);
Mdp goal_only(double gamma = 0.95);

}  // namespace optplan
