#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace optplan {

using State = int;
using Action = int;

struct Transition {
  State next = 0;
  double prob = 0.0;
};

/// Finite tabular MDP with a single absorbing goal state.
///
/// Transition and reward tables are indexed by `s * n_actions + a`. Every
/// state exposes the same number of actions; graph-shaped instances pad
/// states with fewer moves by repeating their first action.
struct Mdp {
  int n_states = 0;
  int n_actions = 0;
  double gamma = 0.95;
  State goal = 0;
  std::vector<std::vector<Transition>> transitions;
  std::vector<double> rewards;

  Mdp() = default;
  Mdp(int states, int actions, double discount, State goal_state);

  std::span<const Transition> outcomes(State s, Action a) const {
    return transitions[index(s, a)];
  }
  double reward(State s, Action a) const { return rewards[index(s, a)]; }

  void set(State s, Action a, std::vector<Transition> next, double r) {
    transitions[index(s, a)] = std::move(next);
    rewards[index(s, a)] = r;
  }

  /// True when every (s, a) has exactly one successor.
  bool deterministic() const;

  std::size_t index(State s, Action a) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions) +
           static_cast<std::size_t>(a);
  }
};

struct Violation {
  std::string rule;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& rule) const;
};

/// Checks the structural assumptions the planners rely on: shape,
/// probability sums, reward range, absorbing zero-reward goal, and
/// goal reachability from every state. Rule ids: "shape", "gamma",
/// "index", "probability-sum", "reward-range", "goal-absorbing",
/// "goal-reward", "unreachable".
ValidationReport validate(const Mdp& mdp);

/// Throws an input error listing every violation when `validate` fails.
void require_valid(const Mdp& mdp);

// ---------------------------------------------------------------------------
// Grid worlds

struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct GridSpec {
  int width = 0;
  int height = 0;
  std::set<Cell> walls;
  Cell goal;
  double move_reward = 0.0;
  double goal_reward = 1.0;
  double slip_probability = 0.0;
  double gamma = 0.95;
};

enum GridAction : Action { kNorth = 0, kSouth = 1, kEast = 2, kWest = 3 };

/// A grid MDP together with its cell/state correspondence.
struct GridWorld {
  GridSpec spec;
  Mdp mdp;
  std::vector<Cell> cell_of_state;
  std::vector<State> state_of_cell;  // row-major, -1 for walls

  State state_at(Cell c) const {
    return state_of_cell[static_cast<std::size_t>(c.row * spec.width + c.col)];
  }
};

/// Four-action grid MDP. States are the non-wall cells in row-major order
/// with the goal cell moved to the last index. Bumping into a wall or the
/// boundary is a self-loop; with slip probability p the move succeeds with
/// 1-p and stays put with p. Entering the goal pays goal_reward, every other
/// transition pays move_reward, and the goal absorbs with zero reward.
GridWorld build_grid_world(const GridSpec& spec);
Mdp build_grid_mdp(const GridSpec& spec);

/// Parses the text map format: equal-width lines of '#' (wall), '.' (floor)
/// and exactly one 'G' (goal). Blank trailing lines are ignored. Errors
/// carry the 1-based line and column of the offending character.
GridSpec parse_grid_map(const std::string& text);

/// Text of the bundled 11x11 four-room map.
const std::string& four_room_map();

/// The bundled four-room domain with default rewards and gamma.
GridWorld build_four_room_world(double gamma = 0.95);
Mdp build_four_room(double gamma = 0.95);

/// Renders the grid as text: '#' wall, '.' floor, 'G' goal and 'B' for
/// every listed initiation state.
std::string render_grid(const GridWorld& world,
                        std::span<const State> marked = {});

// ---------------------------------------------------------------------------
// Graph-shaped instances

/// Builds a goal MDP from per-state action lists. Each inner vector of
/// `actions[s]` is one action's outcome distribution; a reward of
/// `goal_reward` is paid on the probability mass entering `goal`. States
/// with no listed actions get a self-loop. The goal is made absorbing.
Mdp mdp_from_graph(int n_states, State goal,
                   const std::vector<std::vector<std::vector<Transition>>>& actions,
                   double gamma, double goal_reward = 1.0);

/// Deterministic shortest-path MDP from a successor list (one action per
/// edge).
Mdp mdp_from_edges(int n_states, State goal,
                   const std::vector<std::pair<State, State>>& edges,
                   double gamma, double goal_reward = 1.0);

/// Element/subset layout of a set-cover reduction MDP.
struct SetCoverLayout {
  int n_elements = 0;
  int n_subsets = 0;

  State element(int i) const { return i; }
  State subset(int j) const { return n_elements + j; }
  State subset_copy(int j) const { return n_elements + n_subsets + j; }
  State goal() const { return n_elements + 2 * n_subsets; }
};

/// Shortest-path MDP encoding a set-cover instance: element u has an edge
/// to every subset X containing it, each X_i leads to its copy X'_i, and
/// every copy leads to the goal with reward 1. States are ordered elements,
/// subsets, copies, goal. Throws an infeasible error when some element is
/// in no subset.
Mdp from_set_cover(const std::vector<int>& universe,
                   const std::vector<std::vector<int>>& subsets,
                   double gamma = 0.95);

/// Appends a fresh absorbing goal and redirects every action of each
/// listed goal to it with zero reward.
Mdp normalize_multi_goal(const Mdp& mdp, const std::set<State>& goals);

}  // namespace optplan
