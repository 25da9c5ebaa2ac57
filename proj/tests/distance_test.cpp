#include <gtest/gtest.h>

#include <random>

#include "optplan/distance.hpp"
#include "optplan/domains.hpp"
#include "support/oracles.hpp"

using namespace optplan;

TEST(Distance, ChainExampleTable) {
  const DistanceMatrix d = distance_matrix(fig3_chain(), 0.0);
  const int expected[6][6] = {
      {0, 1, 3, 3, 2, 3}, {2, 0, 2, 2, 1, 2}, {3, 3, 0, 1, 2, 3},
      {2, 2, 2, 0, 1, 2}, {1, 1, 1, 1, 0, 1}, {0, 0, 0, 0, 0, 0},
  };
  for (State s = 0; s < 6; ++s)
    for (State t = 0; t < 6; ++t) EXPECT_EQ(d.at(s, t), expected[s][t]) << "s" << s + 1 << " -> s" << t + 1;
  EXPECT_EQ(d.no_option, (std::vector<int>{4, 3, 4, 3, 2, 1, 0}));
}

TEST(Distance, MatchesPathOracleOnRandomGraphs) {
  std::mt19937 rng(21);
  for (int i = 0; i < 60; ++i) {
    const Mdp mdp = oracle::random_deterministic_mdp(rng, 2 + i % 11);
    const auto expected = oracle::deterministic_distance(mdp);
    for (double eps : {0.0, 1e-6}) {
      const DistanceMatrix d = distance_matrix(mdp, eps);
      for (State s = 0; s < mdp.n_states; ++s)
        for (State t = 0; t < mdp.n_states; ++t)
          ASSERT_EQ(d.at(s, t), expected[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)])
              << "instance " << i << " s=" << s << " t=" << t;
    }
  }
}

TEST(Distance, BoundsDiagonalAndGoalPivot) {
  std::mt19937 rng(22);
  for (int i = 0; i < 30; ++i) {
    const Mdp mdp = i % 2 ? oracle::random_deterministic_mdp(rng, 3 + i % 10)
                          : oracle::random_stochastic_mdp(rng, 3 + i % 10);
    const DistanceMatrix d = distance_matrix(mdp, 1e-6);
    for (State s = 0; s < mdp.n_states; ++s) {
      EXPECT_EQ(d.at(s, s), 0);
      const int cap = std::max(0, d.no_option[static_cast<std::size_t>(s)] - 1);
      EXPECT_EQ(d.at(s, mdp.goal), cap);
      for (State t = 0; t < mdp.n_states; ++t) {
        EXPECT_GE(d.at(s, t), 0);
        EXPECT_LE(d.at(s, t), cap);
      }
    }
  }
}

TEST(Distance, TriangleInequalityOnDeterministicGraphs) {
  std::mt19937 rng(23);
  for (int i = 0; i < 40; ++i) {
    const Mdp mdp = oracle::random_deterministic_mdp(rng, 3 + i % 10);
    const DistanceMatrix d = distance_matrix(mdp, 0.0);
    const int n = mdp.n_states;
    for (State a = 0; a < n; ++a)
      for (State b = 0; b < n; ++b)
        for (State c = 0; c < n; ++c) ASSERT_LE(d.at(a, c), d.at(a, b) + d.at(b, c));
  }
}

TEST(Distance, FourRoomSpotChecksAgainstPinnedRuns) {
  const Mdp mdp = build_four_room();
  const ValueFunction vstar = solve_optimal(mdp, reference_tolerance(1e-6));
  const DistanceMatrix d = distance_matrix(mdp, 1e-6, vstar);
  EXPECT_EQ(d.n, 104);
  std::mt19937 rng(24);
  std::uniform_int_distribution<State> pick(0, mdp.n_states - 1);
  for (int i = 0; i < 5; ++i) {
    const State pivot = pick(rng);
    const ConvergenceResult run = pinned_value_iteration(mdp, 1e-6, vstar, pivot);
    for (State s = 0; s < mdp.n_states; ++s) {
      const int expected = std::max(0, std::min(d.no_option[static_cast<std::size_t>(s)] - 1,
                                                run.per_state_iteration[static_cast<std::size_t>(s)]));
      EXPECT_EQ(d.at(s, pivot), expected);
    }
  }
  const auto oracle_d = oracle::deterministic_distance(mdp);
  for (State s = 0; s < mdp.n_states; ++s)
    for (State t = 0; t < mdp.n_states; ++t)
      ASSERT_EQ(d.at(s, t), oracle_d[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)]);
}

TEST(Distance, RadiusIsMaxOfMin) {
  const DistanceMatrix d = distance_matrix(fig3_chain(), 0.0);
  const std::vector<State> points{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(d.radius(points, std::vector<State>{4}), 2);
  EXPECT_EQ(d.radius(points, std::vector<State>{1, 3}), 1);
}

TEST(Distance, NoOptionCountsAreVectorOfHops) {
  const GridWorld world = grid9_world();
  const auto counts = distance_no_options(world.mdp, 1e-6);
  EXPECT_EQ(counts, oracle::hops_to_goal(world.mdp));
}
