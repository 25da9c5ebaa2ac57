#include <gtest/gtest.h>

#include <cstdlib>
#include <nlohmann/json.hpp>
#include <random>

#include "optplan/discovery.hpp"
#include "optplan/domains.hpp"
#include "optplan/error.hpp"
#include "support/oracles.hpp"

using namespace optplan;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kConvergence;
}

// Leaves u_i each feed a private w_i, and every w_i feeds one hub c that is
// two steps from the goal. One option at c serves every leaf.
Mdp funnel(int leaves) {
  const State hub = 2 * leaves;
  const State mid = hub + 1;
  const State goal = hub + 2;
  std::vector<std::pair<State, State>> edges;
  for (int i = 0; i < leaves; ++i) {
    edges.emplace_back(i, leaves + i);
    edges.emplace_back(leaves + i, hub);
  }
  edges.emplace_back(hub, mid);
  edges.emplace_back(mid, goal);
  return mdp_from_edges(goal + 1, goal, edges, 0.9);
}

}  // namespace

TEST(Methods, NamesRoundTrip) {
  for (Method m : {Method::kAMomi, Method::kAMimo, Method::kOptimalMimo, Method::kOptimalMomi, Method::kGreedy,
                   Method::kBetweenness, Method::kEigen}) {
    EXPECT_EQ(parse_method(method_name(m)), m);
  }
  EXPECT_FALSE(parse_method("bogus"));
  EXPECT_TRUE(takes_ell(Method::kAMomi));
  EXPECT_FALSE(takes_ell(Method::kGreedy));
}

TEST(Context, BaselineAndCandidates) {
  const PlanningContext ctx(fig3_chain(), 0.0);
  EXPECT_EQ(ctx.baseline_L(), 4);
  EXPECT_EQ(ctx.candidates(), (std::vector<State>{0, 1, 2, 3, 4, 5}));
  EXPECT_TRUE(ctx.deterministic());
  EXPECT_EQ(ctx.measure(std::vector<State>{}), 4);
  EXPECT_EQ(ctx.measure(std::vector<State>{1, 3}), 2);
}

TEST(Context, FastMeasureAgreesWithValueIteration) {
  std::mt19937 rng(41);
  for (int i = 0; i < 80; ++i) {
    const Mdp mdp = oracle::random_deterministic_mdp(rng, 2 + i % 12);
    const PlanningContext ctx(mdp, i % 2 ? 0.0 : 1e-6);
    std::uniform_int_distribution<State> pick(0, std::max(0, mdp.n_states - 2));
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<State> inits;
      for (int j = 0; j < trial && mdp.n_states > 1; ++j) inits.push_back(pick(rng));
      std::sort(inits.begin(), inits.end());
      inits.erase(std::unique(inits.begin(), inits.end()), inits.end());
      const int fast = ctx.measure(inits);
      EXPECT_EQ(fast, ctx.measure_by_value_iteration(inits));
      EXPECT_EQ(fast, oracle::reference_iterations(mdp, {inits.begin(), inits.end()}));
    }
  }
}

TEST(AMomi, ChainExample) {
  const PlanningContext ctx(fig3_chain(), 0.0);
  const OptionSet set = a_momi(ctx, 2);
  EXPECT_EQ(set.initiation_states(), (std::vector<State>{1, 3}));
  for (const PointOption& o : set.options) EXPECT_EQ(o.term, 6);
  EXPECT_EQ(set.measured_L, 2);
  EXPECT_EQ(ctx.measure_by_value_iteration(set.initiation_states()), 2);
  EXPECT_TRUE(a_momi(ctx, 4).options.empty());
}

TEST(AMomi, FunnelNeedsOneOption) {
  const PlanningContext ctx(funnel(5), 0.0);
  EXPECT_EQ(ctx.baseline_L(), 4);
  const OptionSet set = a_momi(ctx, 3);
  EXPECT_EQ(set.initiation_states(), (std::vector<State>{10}));
  EXPECT_LE(set.measured_L, 3);
  EXPECT_EQ(optimal_momi(ctx, 3).options.size(), 1u);
}

TEST(AMomi, RejectsNonPositiveTarget) {
  const PlanningContext ctx(fig3_chain(), 0.0);
  EXPECT_EQ(kind_of([&] { a_momi(ctx, 0); }), ErrorKind::kInput);
}

TEST(AMimo, ChainExample) {
  const PlanningContext ctx(fig3_chain(), 0.0);
  const OptionSet one = a_mimo(ctx, 1);
  EXPECT_EQ(one.initiation_states(), (std::vector<State>{4}));
  EXPECT_EQ(one.predicted_radius, 2);
  EXPECT_EQ(one.measured_L, 3);

  const OptionSet two = a_mimo(ctx, 2);
  EXPECT_EQ(two.initiation_states(), (std::vector<State>{1, 3}));
  EXPECT_EQ(two.predicted_radius, 1);
  EXPECT_EQ(two.measured_L, 2);
}

TEST(AMimo, LargeKTakesEveryState) {
  const PlanningContext ctx(fig3_chain(), 0.0);
  const OptionSet all = a_mimo(ctx, 10);
  EXPECT_EQ(all.options.size(), 6u);
  EXPECT_EQ(all.measured_L, 1);
  EXPECT_EQ(all.predicted_radius, 0);
  EXPECT_EQ(kind_of([&] { a_mimo(ctx, 0); }), ErrorKind::kInput);
}

TEST(AMimo, ExpandFallsBackWhenOverBudget) {
  const PlanningContext ctx(build_four_room(), 1e-6, 50);
  const OptionSet set = a_mimo(ctx, 8);
  EXPECT_TRUE(set.expand_fallback);
  EXPECT_EQ(set.options.size(), 8u);
  const PlanningContext roomy(build_four_room(), 1e-6);
  EXPECT_FALSE(a_mimo(roomy, 8).expand_fallback);
}

TEST(Greedy, TwoArmTrap) {
  const PlanningContext ctx(fig7_two_arms(), 0.0);
  EXPECT_EQ(ctx.baseline_L(), 4);
  const OptionSet greedy = greedy_mimo(ctx, 2);
  EXPECT_EQ(greedy.options.size(), 2u);
  EXPECT_EQ(greedy.measured_L, 4);
  const OptionSet best = optimal_mimo(ctx, 2);
  EXPECT_EQ(best.measured_L, 2);
  EXPECT_EQ(best.initiation_states(), (std::vector<State>{3, 9}));
  EXPECT_TRUE(greedy_mimo(ctx, 0).options.empty());
}

TEST(Optimal, MimoMatchesExhaustiveVi) {
  std::mt19937 rng(42);
  for (int i = 0; i < 25; ++i) {
    const Mdp mdp = oracle::random_stochastic_mdp(rng, 3 + i % 5);
    const PlanningContext ctx(mdp, 1e-6);
    const int m = static_cast<int>(ctx.candidates().size());
    for (int k = 1; k <= 2; ++k) {
      int best = ctx.baseline_L();
      for (int mask = 1; mask < (1 << m); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) > k) continue;
        std::vector<State> inits;
        for (int j = 0; j < m; ++j)
          if (mask & (1 << j)) inits.push_back(ctx.candidates()[static_cast<std::size_t>(j)]);
        best = std::min(best, ctx.measure_by_value_iteration(inits));
      }
      EXPECT_EQ(optimal_mimo(ctx, k).measured_L, best);
    }
  }
}

TEST(Optimal, MomiSizesAndErrors) {
  const PlanningContext ctx(fig3_chain(), 0.0);
  EXPECT_TRUE(optimal_momi(ctx, 4).options.empty());
  EXPECT_EQ(optimal_momi(ctx, 2).initiation_states(), (std::vector<State>{1, 3}));
  EXPECT_EQ(optimal_momi(ctx, 1).options.size(), 5u);  // s6 is already one sweep out
  EXPECT_EQ(kind_of([&] { optimal_momi(ctx, 0); }), ErrorKind::kInfeasible);

  const PlanningContext tight(build_four_room(), 1e-6, 1000);
  EXPECT_EQ(kind_of([&] { optimal_mimo(tight, 2); }), ErrorKind::kBudget);
  EXPECT_EQ(kind_of([&] { optimal_momi(tight, 5); }), ErrorKind::kBudget);
}

TEST(Optimal, BudgetFromEnvironment) {
  ::setenv("OPTPLAN_BUDGET", "123", 1);
  EXPECT_EQ(default_budget(), 123u);
  ::setenv("OPTPLAN_BUDGET", "junk", 1);
  EXPECT_EQ(default_budget(), kDefaultBudget);
  ::unsetenv("OPTPLAN_BUDGET");
  EXPECT_EQ(default_budget(), kDefaultBudget);
}

TEST(Baselines, BetweennessPicksHubs) {
  const PlanningContext ctx(fig3_chain(), 0.0);
  EXPECT_EQ(betweenness_options(ctx, 2).initiation_states(), (std::vector<State>{4, 5}));
  EXPECT_TRUE(betweenness_options(ctx, 0).options.empty());
  const PlanningContext rooms(build_four_room(), 1e-6);
  EXPECT_EQ(betweenness_options(rooms, 4).options.size(), 4u);
}

TEST(Baselines, EigenSubgoalsAreDistinctNonGoalStates) {
  const PlanningContext ctx(build_four_room(), 1e-6);
  const OptionSet set = eigenoptions(ctx, 6);
  EXPECT_GE(set.options.size(), 1u);
  EXPECT_LE(set.options.size(), 6u);
  const auto inits = set.initiation_states();
  EXPECT_EQ(std::set<State>(inits.begin(), inits.end()).size(), inits.size());
  for (State s : inits) EXPECT_NE(s, ctx.mdp().goal);
  // Stable across runs.
  EXPECT_EQ(eigenoptions(ctx, 6).initiation_states(), inits);
}

TEST(Baselines, BestSubsetNeverWorse) {
  const PlanningContext ctx(build_four_room(), 1e-6);
  for (int k = 1; k <= 4; ++k) {
    const OptionSet set = betweenness_options(ctx, k);
    const OptionSet best = best_subset(ctx, set);
    EXPECT_LE(best.measured_L, set.measured_L);
    EXPECT_LE(best.options.size(), set.options.size());
  }
}

TEST(Discover, DispatchAndJson) {
  const PlanningContext ctx(fig3_chain(), 0.0);
  const OptionSet set = discover(ctx, Method::kAMimo, 2);
  const auto j = nlohmann::json::parse(option_set_to_json(set));
  EXPECT_EQ(j["method"], "a-mimo");
  EXPECT_EQ(j["options"].size(), 2u);
  EXPECT_EQ(j["options"][0]["init"], 1);
  EXPECT_EQ(j["options"][0]["term"], 6);
  EXPECT_EQ(j["predicted_radius"], 1);
  EXPECT_EQ(j["measured_L"], 2);

  const auto momi = nlohmann::json::parse(option_set_to_json(discover(ctx, Method::kAMomi, 2)));
  EXPECT_TRUE(momi["predicted_radius"].is_null());
}

TEST(Discover, StochasticExample) {
  const PlanningContext ctx(fig6_stochastic(), 0.0);
  EXPECT_FALSE(ctx.deterministic());
  EXPECT_EQ(ctx.baseline_L(), 3);
  EXPECT_EQ(ctx.measure(std::vector<State>{1}), 3);
  EXPECT_EQ(ctx.measure(std::vector<State>{2}), 3);
  EXPECT_EQ(ctx.measure(std::vector<State>{1, 2}), 2);
  EXPECT_EQ(optimal_mimo(ctx, 1).measured_L, 2);
}
