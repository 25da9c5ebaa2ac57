#include "optplan/domains.hpp"

#include "optplan/error.hpp"

namespace optplan {

namespace {

// Figure-style graphs are labelled from s1, so state i prints as s{i+1}.
std::vector<std::string> one_based_names(int n, State goal) {
  std::vector<std::string> names;
  for (State s = 0; s < n; ++s) names.push_back(s == goal ? "g" : "s" + std::to_string(s + 1));
  return names;
}

}  // namespace

Mdp fig3_chain(double gamma) {
  // s1..s6 are 0..5, g is 6.
  return mdp_from_edges(7, 6, {{0, 1}, {2, 3}, {1, 4}, {3, 4}, {4, 5}, {5, 6}}, gamma);
}

Mdp fig6_stochastic(double gamma) {
  // s0 has one action that lands on s1 or s2 with equal odds.
  std::vector<std::vector<std::vector<Transition>>> actions(5);
  actions[0] = {{{1, 0.5}, {2, 0.5}}};
  actions[1] = {{{3, 1.0}}};
  actions[2] = {{{3, 1.0}}};
  actions[3] = {{{4, 1.0}}};
  return mdp_from_graph(5, 4, actions, gamma);
}

Mdp fig7_two_arms(double gamma) {
  // Two arms of three leaves feeding a hub, then a two-step tail to g.
  std::vector<std::pair<State, State>> edges;
  for (int arm = 0; arm < 2; ++arm) {
    const State base = arm * 6;
    for (int leaf = 0; leaf < 3; ++leaf) edges.emplace_back(base + leaf, base + 3);
    edges.emplace_back(base + 3, base + 4);
    edges.emplace_back(base + 4, base + 5);
    edges.emplace_back(base + 5, 12);
  }
  return mdp_from_edges(13, 12, edges, gamma);
}

GridWorld grid9_world(double gamma) {
  GridSpec spec;
  spec.width = 9;
  spec.height = 9;
  spec.goal = {8, 8};
  spec.gamma = gamma;
  return build_grid_world(spec);
}

Mdp goal_only(double gamma) {
  Mdp mdp(1, 1, gamma, 0);
  mdp.set(0, 0, {{0, 1.0}}, 0.0);
  return mdp;
}

std::vector<std::string> default_state_names(const Mdp& mdp) {
  std::vector<std::string> names;
  for (State s = 0; s < mdp.n_states; ++s) names.push_back(s == mdp.goal ? "g" : "s" + std::to_string(s));
  return names;
}

Domain grid_domain(std::string name, GridWorld world) {
  Domain d;
  d.name = std::move(name);
  d.mdp = world.mdp;
  for (const Cell& c : world.cell_of_state) d.state_names.push_back("r" + std::to_string(c.row) + "c" + std::to_string(c.col));
  d.grid = std::move(world);
  return d;
}

std::vector<std::string> builtin_domain_names() {
  return {"fig3", "fig6", "fig7", "fourroom", "grid9", "goal-only"};
}

Domain load_builtin(const std::string& name, std::optional<double> gamma) {
  if (name == "fourroom") return grid_domain(name, build_four_room_world(gamma.value_or(0.95)));
  if (name == "grid9") return grid_domain(name, grid9_world(gamma.value_or(0.95)));

  Domain d;
  d.name = name;
  if (name == "fig3") {
    d.mdp = fig3_chain(gamma.value_or(0.9));
    d.state_names = one_based_names(d.mdp.n_states, d.mdp.goal);
  } else if (name == "fig6") {
    d.mdp = fig6_stochastic(gamma.value_or(0.9));
    d.state_names = default_state_names(d.mdp);
  } else if (name == "fig7") {
    d.mdp = fig7_two_arms(gamma.value_or(0.9));
    d.state_names = one_based_names(d.mdp.n_states, d.mdp.goal);
  } else if (name == "goal-only") {
    d.mdp = goal_only(gamma.value_or(0.95));
    d.state_names = {"g"};
  } else {
    throw input_error("unknown domain '" + name + "'");
  }
  return d;
}

}  // namespace optplan
