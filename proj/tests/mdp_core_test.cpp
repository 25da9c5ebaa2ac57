#include <gtest/gtest.h>

#include <random>

#include "optplan/domains.hpp"
#include "optplan/error.hpp"
#include "optplan/mdp_io.hpp"
#include "support/oracles.hpp"

using namespace optplan;

namespace {

Mdp two_state_chain() {
  Mdp mdp(2, 1, 0.9, 1);
  mdp.set(0, 0, {{1, 1.0}}, 1.0);
  mdp.set(1, 0, {{1, 1.0}}, 0.0);
  return mdp;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kConvergence;
}

}  // namespace

TEST(Validate, AcceptsWellFormedChain) { EXPECT_TRUE(validate(two_state_chain()).ok()); }

TEST(Validate, FlagsEachRule) {
  Mdp bad_sum = two_state_chain();
  bad_sum.set(0, 0, {{1, 0.6}}, 1.0);
  EXPECT_TRUE(validate(bad_sum).has("probability-sum"));

  Mdp bad_gamma = two_state_chain();
  bad_gamma.gamma = 1.0;
  EXPECT_TRUE(validate(bad_gamma).has("gamma"));

  Mdp negative = two_state_chain();
  negative.rewards[0] = -0.5;
  EXPECT_TRUE(validate(negative).has("reward-range"));

  Mdp leaky_goal = two_state_chain();
  leaky_goal.set(1, 0, {{0, 1.0}}, 0.0);
  EXPECT_TRUE(validate(leaky_goal).has("goal-absorbing"));

  Mdp paid_goal = two_state_chain();
  paid_goal.rewards[1] = 0.5;
  EXPECT_TRUE(validate(paid_goal).has("goal-reward"));

  Mdp stuck(3, 1, 0.9, 2);
  stuck.set(0, 0, {{2, 1.0}}, 1.0);
  stuck.set(1, 0, {{1, 1.0}}, 0.0);
  stuck.set(2, 0, {{2, 1.0}}, 0.0);
  const ValidationReport report = validate(stuck);
  EXPECT_TRUE(report.has("unreachable"));
  EXPECT_FALSE(report.has("probability-sum"));

  Mdp out_of_range = two_state_chain();
  out_of_range.set(0, 0, {{5, 1.0}}, 1.0);
  EXPECT_TRUE(validate(out_of_range).has("index"));

  EXPECT_EQ(kind_of([&] { require_valid(stuck); }), ErrorKind::kInput);
}

TEST(Grid, ParsesMapAndOrdersGoalLast) {
  const GridSpec spec = parse_grid_map("..#\n..G\n");
  EXPECT_EQ(spec.width, 3);
  EXPECT_EQ(spec.height, 2);
  EXPECT_EQ(spec.walls.size(), 1u);
  EXPECT_EQ(spec.goal, (Cell{1, 2}));

  const GridWorld world = build_grid_world(spec);
  EXPECT_EQ(world.mdp.n_states, 5);
  EXPECT_EQ(world.mdp.goal, 4);
  EXPECT_EQ(world.cell_of_state[4], (Cell{1, 2}));
  EXPECT_EQ(world.state_at({0, 0}), 0);
  EXPECT_EQ(world.state_at({1, 1}), 3);
  EXPECT_TRUE(validate(world.mdp).ok());
}

TEST(Grid, WallBumpIsSelfLoop) {
  const GridWorld world = build_grid_world(parse_grid_map(".G\n"));
  const State s = world.state_at({0, 0});
  EXPECT_EQ(world.mdp.outcomes(s, kNorth)[0].next, s);
  EXPECT_EQ(world.mdp.outcomes(s, kWest)[0].next, s);
  EXPECT_EQ(world.mdp.outcomes(s, kEast)[0].next, world.mdp.goal);
  EXPECT_DOUBLE_EQ(world.mdp.reward(s, kEast), 1.0);
  EXPECT_DOUBLE_EQ(world.mdp.reward(s, kNorth), 0.0);
}

TEST(Grid, SlipSplitsOutcome) {
  GridSpec spec = parse_grid_map(".G\n");
  spec.slip_probability = 0.25;
  const GridWorld world = build_grid_world(spec);
  const auto out = world.mdp.outcomes(0, kEast);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_DOUBLE_EQ(out[0].prob + out[1].prob, 1.0);
  EXPECT_DOUBLE_EQ(world.mdp.reward(0, kEast), 0.75);
  EXPECT_FALSE(world.mdp.deterministic());
}

TEST(Grid, MalformedMapsReportPosition) {
  auto message = [](const std::string& text) {
    try {
      parse_grid_map(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInput);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("..\n.x\nG.\n").find("line 2 column 2"), std::string::npos);
  EXPECT_NE(message("...\n..\nG..\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("G.\n.G\n").find("line 2 column 2"), std::string::npos);
  EXPECT_NE(message("...\n...\n").find("no goal"), std::string::npos);
}

TEST(Grid, DisconnectedCellRejected) {
  EXPECT_EQ(kind_of([] { build_grid_world(parse_grid_map(".#G\n")); }), ErrorKind::kInput);
}

TEST(Grid, FourRoomShape) {
  const GridWorld world = build_four_room_world();
  EXPECT_EQ(world.spec.width, 11);
  EXPECT_EQ(world.spec.height, 11);
  EXPECT_EQ(world.mdp.n_states, 104);
  EXPECT_EQ(world.spec.goal, (Cell{10, 10}));
  for (Cell door : {Cell{2, 5}, Cell{9, 5}, Cell{5, 1}, Cell{6, 8}}) EXPECT_GE(world.state_at(door), 0);
  EXPECT_EQ(render_grid(world), four_room_map());
}

TEST(Grid, Grid9PathLengthsMatchBfs) {
  const GridWorld world = grid9_world();
  EXPECT_EQ(world.mdp.n_states, 81);
  const std::vector<int> hops = oracle::hops_to_goal(world.mdp);
  EXPECT_EQ(hops[static_cast<std::size_t>(world.state_at({0, 0}))], 16);
  for (State s = 0; s < world.mdp.n_states; ++s) {
    const Cell c = world.cell_of_state[static_cast<std::size_t>(s)];
    EXPECT_EQ(hops[static_cast<std::size_t>(s)], (8 - c.row) + (8 - c.col));
  }
}

TEST(Grid, RenderMarksInitiationStates) {
  const GridWorld world = build_grid_world(parse_grid_map("...\n.#G\n"));
  const std::vector<State> marked{world.state_at({0, 1})};
  EXPECT_EQ(render_grid(world, marked), ".B.\n.#G\n");
}

TEST(GraphMdp, PadsActionsAndPaysOnEntry) {
  std::vector<std::vector<std::vector<Transition>>> actions(3);
  actions[0] = {{{1, 1.0}}, {{2, 0.5}, {1, 0.5}}};
  actions[1] = {{{2, 1.0}}};
  const Mdp mdp = mdp_from_graph(3, 2, actions, 0.9);
  EXPECT_EQ(mdp.n_actions, 2);
  EXPECT_EQ(mdp.outcomes(1, 1)[0].next, 2);  // padded with action 0
  EXPECT_DOUBLE_EQ(mdp.reward(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(mdp.reward(1, 0), 1.0);
  EXPECT_EQ(mdp.outcomes(2, 0)[0].next, 2);
  EXPECT_TRUE(validate(mdp).ok());
}

TEST(SetCoverReduction, FigureTwoInstance) {
  const Mdp mdp = from_set_cover({1, 2, 3, 4, 5}, {{1, 2, 3}, {3, 4, 5}});
  EXPECT_EQ(mdp.n_states, 10);
  EXPECT_TRUE(validate(mdp).ok());
  const SetCoverLayout layout{5, 2};
  EXPECT_EQ(layout.goal(), mdp.goal);
  const std::vector<int> hops = oracle::hops_to_goal(mdp);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(hops[static_cast<std::size_t>(layout.element(i))], 3);
  for (int j = 0; j < 2; ++j) {
    EXPECT_EQ(hops[static_cast<std::size_t>(layout.subset(j))], 2);
    EXPECT_EQ(hops[static_cast<std::size_t>(layout.subset_copy(j))], 1);
  }
  const auto succ = oracle::successors(mdp);
  const auto& third = succ[static_cast<std::size_t>(layout.element(2))];
  EXPECT_NE(std::find(third.begin(), third.end(), layout.subset(0)), third.end());
  EXPECT_NE(std::find(third.begin(), third.end(), layout.subset(1)), third.end());
}

TEST(SetCoverReduction, Rejections) {
  EXPECT_EQ(kind_of([] { from_set_cover({1, 2}, {{1}}); }), ErrorKind::kInfeasible);
  EXPECT_EQ(kind_of([] { from_set_cover({1, 1}, {{1}}); }), ErrorKind::kInput);
  EXPECT_EQ(kind_of([] { from_set_cover({1}, {{1, 7}}); }), ErrorKind::kInput);
}

TEST(MultiGoal, AddsAbsorbingSink) {
  Mdp mdp(3, 1, 0.9, 2);
  mdp.set(0, 0, {{1, 1.0}}, 1.0);
  mdp.set(1, 0, {{1, 1.0}}, 0.0);
  mdp.set(2, 0, {{2, 1.0}}, 0.0);
  const Mdp out = normalize_multi_goal(mdp, {1, 2});
  EXPECT_EQ(out.n_states, 4);
  EXPECT_EQ(out.goal, 3);
  EXPECT_EQ(out.outcomes(1, 0)[0].next, 3);
  EXPECT_DOUBLE_EQ(out.reward(1, 0), 0.0);
  EXPECT_TRUE(validate(out).ok());
}

TEST(MdpJson, RoundTripAndStringProbabilities) {
  const Mdp fig6 = fig6_stochastic();
  const Mdp back = parse_mdp_json(mdp_to_json(fig6));
  EXPECT_EQ(back.n_states, fig6.n_states);
  EXPECT_EQ(back.goal, fig6.goal);
  EXPECT_EQ(back.transitions.size(), fig6.transitions.size());
  for (std::size_t i = 0; i < fig6.transitions.size(); ++i) {
    ASSERT_EQ(back.transitions[i].size(), fig6.transitions[i].size());
    EXPECT_DOUBLE_EQ(back.rewards[i], fig6.rewards[i]);
  }

  const Mdp parsed = parse_mdp_json(R"({"n_states":2,"n_actions":1,"gamma":"0.9","goal":1,
    "transitions":[[0,0,1,"1.0"],[1,0,1,1]],"rewards":[[0,0,"1"]]})");
  EXPECT_DOUBLE_EQ(parsed.gamma, 0.9);
  EXPECT_DOUBLE_EQ(parsed.reward(0, 0), 1.0);
}

TEST(MdpJson, RejectsBadDocuments) {
  EXPECT_EQ(kind_of([] { parse_mdp_json("{"); }), ErrorKind::kInput);
  EXPECT_EQ(kind_of([] { parse_mdp_json(R"({"n_states":2})"); }), ErrorKind::kInput);
  EXPECT_EQ(kind_of([] {
              parse_mdp_json(R"({"n_states":2,"n_actions":1,"gamma":0.9,"goal":1,
                "transitions":[[0,0,1,"0.4"],[1,0,1,1]]})");
            }),
            ErrorKind::kInput);
  EXPECT_EQ(kind_of([] {
              parse_mdp_json(R"({"n_states":2,"n_actions":1,"gamma":0.9,"goal":1,
                "transitions":[[0,0,1,"abc"],[1,0,1,1]]})");
            }),
            ErrorKind::kInput);
}

TEST(Domains, BuiltinsLoadAndValidate) {
  for (const std::string& name : builtin_domain_names()) {
    const Domain d = load_builtin(name);
    EXPECT_TRUE(validate(d.mdp).ok()) << name;
    EXPECT_EQ(static_cast<int>(d.state_names.size()), d.mdp.n_states) << name;
  }
  EXPECT_EQ(load_builtin("fig3").state_names[0], "s1");
  EXPECT_EQ(load_builtin("fig3").state_names[6], "g");
  EXPECT_DOUBLE_EQ(load_builtin("grid9", 0.8).mdp.gamma, 0.8);
  EXPECT_EQ(kind_of([] { load_builtin("nowhere"); }), ErrorKind::kInput);
}

TEST(Domains, RandomInstancesAreValid) {
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    EXPECT_TRUE(validate(oracle::random_deterministic_mdp(rng, 2 + i % 11)).ok());
    EXPECT_TRUE(validate(oracle::random_stochastic_mdp(rng, 2 + i % 11)).ok());
  }
}
