#include "optplan/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>

#include "optplan/error.hpp"
#include "four_room_map.inc"

namespace optplan {

namespace {

constexpr double kProbabilityTolerance = 1e-12;

std::string cell_name(Cell c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

}  // namespace

Mdp::Mdp(int states, int actions, double discount, State goal_state)
    : n_states(states),
      n_actions(actions),
      gamma(discount),
      goal(goal_state),
      transitions(static_cast<std::size_t>(states) * static_cast<std::size_t>(actions)),
      rewards(static_cast<std::size_t>(states) * static_cast<std::size_t>(actions), 0.0) {}

bool Mdp::deterministic() const {
  return std::all_of(transitions.begin(), transitions.end(),
                     [](const auto& t) { return t.size() == 1; });
}

bool ValidationReport::has(const std::string& rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

ValidationReport validate(const Mdp& mdp) {
  ValidationReport report;
  auto add = [&](std::string rule, std::string message) {
    report.violations.push_back({std::move(rule), std::move(message)});
  };

  const std::size_t cells = static_cast<std::size_t>(std::max(mdp.n_states, 0)) *
                            static_cast<std::size_t>(std::max(mdp.n_actions, 0));
  if (mdp.n_states < 1 || mdp.n_actions < 1 || mdp.transitions.size() != cells ||
      mdp.rewards.size() != cells) {
    add("shape", "transition/reward tables do not match n_states x n_actions");
    return report;
  }
  if (!(mdp.gamma > 0.0 && mdp.gamma < 1.0)) {
    add("gamma", "gamma must lie in (0, 1)");
  }
  if (mdp.goal < 0 || mdp.goal >= mdp.n_states) {
    add("index", "goal index out of range");
    return report;
  }

  bool indices_ok = true;
  for (State s = 0; s < mdp.n_states; ++s) {
    for (Action a = 0; a < mdp.n_actions; ++a) {
      const std::string where = "(s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")";
      double total = 0.0;
      for (const Transition& t : mdp.outcomes(s, a)) {
        if (t.next < 0 || t.next >= mdp.n_states) {
          add("index", "successor out of range at " + where);
          indices_ok = false;
        }
        if (!std::isfinite(t.prob) || t.prob < 0.0) {
          add("probability-sum", "negative or non-finite probability at " + where);
        }
        total += t.prob;
      }
      if (std::abs(total - 1.0) > kProbabilityTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "probabilities at " << where << " sum to " << total;
        add("probability-sum", msg.str());
      }
      const double r = mdp.reward(s, a);
      if (!std::isfinite(r) || r < 0.0) {
        add("reward-range", "reward at " + where + " is negative");
      }
    }
  }

  for (Action a = 0; a < mdp.n_actions; ++a) {
    double stay = 0.0;
    for (const Transition& t : mdp.outcomes(mdp.goal, a)) {
      if (t.next == mdp.goal) stay += t.prob;
    }
    if (std::abs(stay - 1.0) > kProbabilityTolerance) {
      add("goal-absorbing", "goal action " + std::to_string(a) + " leaves the goal");
    }
    if (mdp.reward(mdp.goal, a) != 0.0) {
      add("goal-reward", "goal action " + std::to_string(a) + " has nonzero reward");
    }
  }

  if (!indices_ok) return report;

  // Reverse reachability from the goal over positive-probability edges.
  std::vector<std::vector<State>> predecessors(static_cast<std::size_t>(mdp.n_states));
  for (State s = 0; s < mdp.n_states; ++s) {
    for (Action a = 0; a < mdp.n_actions; ++a) {
      for (const Transition& t : mdp.outcomes(s, a)) {
        if (t.prob > 0.0 && t.next != s) predecessors[static_cast<std::size_t>(t.next)].push_back(s);
      }
    }
  }
  std::vector<bool> reaches(static_cast<std::size_t>(mdp.n_states), false);
  std::deque<State> queue{mdp.goal};
  reaches[static_cast<std::size_t>(mdp.goal)] = true;
  while (!queue.empty()) {
    const State v = queue.front();
    queue.pop_front();
    for (State u : predecessors[static_cast<std::size_t>(v)]) {
      if (!reaches[static_cast<std::size_t>(u)]) {
        reaches[static_cast<std::size_t>(u)] = true;
        queue.push_back(u);
      }
    }
  }
  for (State s = 0; s < mdp.n_states; ++s) {
    if (!reaches[static_cast<std::size_t>(s)]) {
      add("unreachable", "state " + std::to_string(s) + " cannot reach the goal");
    }
  }
  return report;
}

void require_valid(const Mdp& mdp) {
  const ValidationReport report = validate(mdp);
  if (report.ok()) return;
  std::string msg = "invalid MDP:";
  for (const Violation& v : report.violations) msg += "\n  [" + v.rule + "] " + v.message;
  throw input_error(msg);
}

// ---------------------------------------------------------------------------

GridWorld build_grid_world(const GridSpec& spec) {
  if (spec.width < 1 || spec.height < 1) throw input_error("grid must be at least 1x1");
  auto in_bounds = [&](Cell c) {
    return c.row >= 0 && c.row < spec.height && c.col >= 0 && c.col < spec.width;
  };
  if (!in_bounds(spec.goal)) throw input_error("goal cell " + cell_name(spec.goal) + " is off the grid");
  if (spec.walls.contains(spec.goal)) throw input_error("goal cell " + cell_name(spec.goal) + " is a wall");
  for (Cell w : spec.walls) {
    if (!in_bounds(w)) throw input_error("wall cell " + cell_name(w) + " is off the grid");
  }
  if (!(spec.slip_probability >= 0.0 && spec.slip_probability < 1.0)) {
    throw input_error("slip probability must lie in [0, 1)");
  }
  if (spec.goal_reward < 0.0 || spec.move_reward < 0.0) throw input_error("grid rewards must be nonnegative");

  const auto open = [&](Cell c) { return in_bounds(c) && !spec.walls.contains(c); };
  constexpr int kDr[4] = {-1, 1, 0, 0};
  constexpr int kDc[4] = {0, 0, 1, -1};

  // Every floor cell must connect to the goal.
  std::set<Cell> seen{spec.goal};
  std::deque<Cell> queue{spec.goal};
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (int a = 0; a < 4; ++a) {
      const Cell n{c.row + kDr[a], c.col + kDc[a]};
      if (open(n) && seen.insert(n).second) queue.push_back(n);
    }
  }

  GridWorld world;
  world.spec = spec;
  world.state_of_cell.assign(static_cast<std::size_t>(spec.width * spec.height), -1);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      const Cell cell{r, c};
      if (!open(cell) || cell == spec.goal) continue;
      if (!seen.contains(cell)) throw input_error("cell " + cell_name(cell) + " is not connected to the goal");
      world.state_of_cell[static_cast<std::size_t>(r * spec.width + c)] =
          static_cast<State>(world.cell_of_state.size());
      world.cell_of_state.push_back(cell);
    }
  }
  const State goal = static_cast<State>(world.cell_of_state.size());
  world.state_of_cell[static_cast<std::size_t>(spec.goal.row * spec.width + spec.goal.col)] = goal;
  world.cell_of_state.push_back(spec.goal);

  const int n = goal + 1;
  Mdp mdp(n, 4, spec.gamma, goal);
  const double p = spec.slip_probability;
  for (State s = 0; s < n; ++s) {
    const Cell from = world.cell_of_state[static_cast<std::size_t>(s)];
    for (Action a = 0; a < 4; ++a) {
      if (s == goal) {
        mdp.set(s, a, {{s, 1.0}}, 0.0);
        continue;
      }
      const Cell to{from.row + kDr[a], from.col + kDc[a]};
      if (!open(to)) {
        mdp.set(s, a, {{s, 1.0}}, spec.move_reward);
        continue;
      }
      const State next = world.state_at(to);
      const double enter = next == goal ? spec.goal_reward : spec.move_reward;
      if (p == 0.0) {
        mdp.set(s, a, {{next, 1.0}}, enter);
      } else {
        mdp.set(s, a, {{next, 1.0 - p}, {s, p}}, (1.0 - p) * enter + p * spec.move_reward);
      }
    }
  }
  world.mdp = std::move(mdp);
  return world;
}

Mdp build_grid_mdp(const GridSpec& spec) { return build_grid_world(spec).mdp; }

GridSpec parse_grid_map(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw input_error("map: empty map");

  GridSpec spec;
  spec.height = static_cast<int>(lines.size());
  spec.width = static_cast<int>(lines.front().size());
  if (spec.width == 0) throw input_error("map: line 1 column 1: empty line");
  bool have_goal = false;
  for (int r = 0; r < spec.height; ++r) {
    const std::string& line = lines[static_cast<std::size_t>(r)];
    const std::string where = "map: line " + std::to_string(r + 1);
    if (static_cast<int>(line.size()) != spec.width) {
      const int col = std::min(static_cast<int>(line.size()), spec.width) + 1;
      throw input_error(where + " column " + std::to_string(col) + ": expected width " +
                        std::to_string(spec.width) + ", got " + std::to_string(line.size()));
    }
    for (int c = 0; c < spec.width; ++c) {
      const char ch = line[static_cast<std::size_t>(c)];
      switch (ch) {
        case '#': spec.walls.insert({r, c}); break;
        case '.': break;
        case 'G':
          if (have_goal) throw input_error(where + " column " + std::to_string(c + 1) + ": second goal");
          have_goal = true;
          spec.goal = {r, c};
          break;
        default:
          throw input_error(where + " column " + std::to_string(c + 1) + ": unexpected character '" +
                            std::string(1, ch) + "'");
      }
    }
  }
  if (!have_goal) throw input_error("map: no goal cell 'G'");
  return spec;
}

const std::string& four_room_map() {
  static const std::string map(kFourRoomMap);
  return map;
}

GridWorld build_four_room_world(double gamma) {
  GridSpec spec = parse_grid_map(four_room_map());
  spec.gamma = gamma;
  return build_grid_world(spec);
}

Mdp build_four_room(double gamma) { return build_four_room_world(gamma).mdp; }

std::string render_grid(const GridWorld& world, std::span<const State> marked) {
  const GridSpec& spec = world.spec;
  std::vector<std::string> rows(static_cast<std::size_t>(spec.height),
                                std::string(static_cast<std::size_t>(spec.width), '.'));
  for (Cell w : spec.walls) rows[static_cast<std::size_t>(w.row)][static_cast<std::size_t>(w.col)] = '#';
  for (State s : marked) {
    const Cell c = world.cell_of_state.at(static_cast<std::size_t>(s));
    rows[static_cast<std::size_t>(c.row)][static_cast<std::size_t>(c.col)] = 'B';
  }
  rows[static_cast<std::size_t>(spec.goal.row)][static_cast<std::size_t>(spec.goal.col)] = 'G';
  std::string out;
  for (const std::string& r : rows) out += r + "\n";
  return out;
}

// ---------------------------------------------------------------------------

Mdp mdp_from_graph(int n_states, State goal,
                   const std::vector<std::vector<std::vector<Transition>>>& actions,
                   double gamma, double goal_reward) {
  if (n_states < 1 || goal < 0 || goal >= n_states) throw input_error("graph MDP: bad state count or goal");
  if (static_cast<int>(actions.size()) > n_states) throw input_error("graph MDP: too many action lists");
  std::size_t width = 1;
  for (const auto& list : actions) width = std::max(width, list.size());

  Mdp mdp(n_states, static_cast<int>(width), gamma, goal);
  for (State s = 0; s < n_states; ++s) {
    const bool listed = s != goal && static_cast<std::size_t>(s) < actions.size() &&
                        !actions[static_cast<std::size_t>(s)].empty();
    for (Action a = 0; a < mdp.n_actions; ++a) {
      if (!listed) {
        mdp.set(s, a, {{s, 1.0}}, 0.0);
        continue;
      }
      const auto& list = actions[static_cast<std::size_t>(s)];
      const auto& outcome = list[static_cast<std::size_t>(a) < list.size() ? static_cast<std::size_t>(a) : 0];
      double into_goal = 0.0;
      for (const Transition& t : outcome) {
        if (t.next < 0 || t.next >= n_states) throw input_error("graph MDP: successor out of range");
        if (t.next == goal) into_goal += t.prob;
      }
      mdp.set(s, a, outcome, into_goal * goal_reward);
    }
  }
  return mdp;
}

Mdp mdp_from_edges(int n_states, State goal, const std::vector<std::pair<State, State>>& edges,
                   double gamma, double goal_reward) {
  std::vector<std::vector<std::vector<Transition>>> actions(static_cast<std::size_t>(n_states));
  for (auto [from, to] : edges) {
    if (from < 0 || from >= n_states) throw input_error("graph MDP: edge source out of range");
    actions[static_cast<std::size_t>(from)].push_back({{to, 1.0}});
  }
  return mdp_from_graph(n_states, goal, actions, gamma, goal_reward);
}

Mdp from_set_cover(const std::vector<int>& universe, const std::vector<std::vector<int>>& subsets,
                   double gamma) {
  std::map<int, int> position;
  for (int u : universe) {
    if (!position.emplace(u, static_cast<int>(position.size())).second) {
      throw input_error("set cover: duplicate element " + std::to_string(u));
    }
  }
  SetCoverLayout layout{static_cast<int>(universe.size()), static_cast<int>(subsets.size())};
  std::vector<std::pair<State, State>> edges;
  std::vector<bool> covered(universe.size(), false);
  std::vector<std::vector<State>> member_of(universe.size());
  for (int j = 0; j < layout.n_subsets; ++j) {
    for (int u : subsets[static_cast<std::size_t>(j)]) {
      auto it = position.find(u);
      if (it == position.end()) {
        throw input_error("set cover: subset " + std::to_string(j) + " has element " + std::to_string(u) +
                          " outside the universe");
      }
      auto& owners = member_of[static_cast<std::size_t>(it->second)];
      if (owners.empty() || owners.back() != layout.subset(j)) owners.push_back(layout.subset(j));
      covered[static_cast<std::size_t>(it->second)] = true;
    }
  }
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (!covered[i]) {
      throw infeasible_error("set cover: element " + std::to_string(universe[i]) +
                             " is in no subset, so no cover exists");
    }
    for (State x : member_of[i]) edges.emplace_back(layout.element(static_cast<int>(i)), x);
  }
  for (int j = 0; j < layout.n_subsets; ++j) {
    edges.emplace_back(layout.subset(j), layout.subset_copy(j));
    edges.emplace_back(layout.subset_copy(j), layout.goal());
  }
  return mdp_from_edges(layout.goal() + 1, layout.goal(), edges, gamma);
}

Mdp normalize_multi_goal(const Mdp& mdp, const std::set<State>& goals) {
  if (goals.empty()) throw input_error("normalize: goal set is empty");
  for (State g : goals) {
    if (g < 0 || g >= mdp.n_states) throw input_error("normalize: goal " + std::to_string(g) + " out of range");
  }
  const State sink = mdp.n_states;
  Mdp out(mdp.n_states + 1, mdp.n_actions, mdp.gamma, sink);
  for (State s = 0; s < mdp.n_states; ++s) {
    for (Action a = 0; a < mdp.n_actions; ++a) {
      if (goals.contains(s)) {
        out.set(s, a, {{sink, 1.0}}, 0.0);
      } else {
        auto next = mdp.outcomes(s, a);
        out.set(s, a, {next.begin(), next.end()}, mdp.reward(s, a));
      }
    }
  }
  for (Action a = 0; a < out.n_actions; ++a) out.set(sink, a, {{sink, 1.0}}, 0.0);
  return out;
}

}  // namespace optplan
