#pragma once

#include <cstdint>
#include <vector>

#include "optplan/mdp.hpp"

namespace optplan {

// ---------------------------------------------------------------------------
// Set cover

struct SetCoverInstance {
  std::vector<int> universe;
  std::vector<std::vector<int>> subsets;
};

/// Chvatal's greedy cover: repeatedly take the subset covering the most
/// uncovered elements, lowest index on ties. Returns subset indices in
/// selection order. Throws an infeasible error if some element is in no
/// subset.
std::vector<int> greedy_set_cover(const SetCoverInstance& inst);

/// Minimum-cardinality cover, lexicographically smallest among minima
/// (sorted indices). Refuses instances with more than `max_subsets` subsets.
std::vector<int> brute_force_set_cover(const SetCoverInstance& inst, int max_subsets = 20);

/// True when the chosen subsets cover the universe.
bool covers(const SetCoverInstance& inst, const std::vector<int>& chosen);

// ---------------------------------------------------------------------------
// Asymmetric k-center

/// Points plus an asymmetric integer distance over them. `dist` is
/// row-major over point positions: dist[p * m + c] is the cost of serving
/// point p from center c.
struct KCenterInstance {
  std::vector<State> points;
  std::vector<int> dist;
  int k = 1;

  int size() const { return static_cast<int>(points.size()); }
  int at(int p, int c) const {
    return dist[static_cast<std::size_t>(p) * points.size() + static_cast<std::size_t>(c)];
  }
};

struct KCenterResult {
  std::vector<State> centers;  // point labels, ascending
  int radius = 0;              // P(C) = max_p min_c dist(p, c)
  bool triangle_inequality = true;
};

/// max over points of min over the given center positions.
int k_center_objective(const KCenterInstance& inst, const std::vector<int>& center_positions);

bool satisfies_triangle_inequality(const KCenterInstance& inst);

/// Archer-style approximation. Runs the cover procedure at every distinct
/// distance r and keeps the accepted center set (at most k centers) with
/// the smallest achieved radius. The procedure first tries a direct greedy cover at r, then
/// falls back to center-capturing-vertex pruning (each pick clears
/// everything within two hops of r) followed by recursive greedy covering of
/// the previous round's centers until at most the remaining budget is left.
KCenterResult asym_k_center(const KCenterInstance& inst);

/// Exact minimizer of P(C) over |C| = min(k, m); lexicographically first
/// among ties. Refuses when C(m, k) exceeds `cap`.
KCenterResult brute_force_k_center(const KCenterInstance& inst, std::uint64_t cap = 1'000'000);

/// Binomial coefficient saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// ---------------------------------------------------------------------------
// Graph analytics

struct Digraph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // sorted, no duplicates
};

/// Directed graph of positive-probability primitive transitions, self-loops
/// dropped.
Digraph transition_graph(const Mdp& mdp);

/// Adds the reverse of every edge.
Digraph symmetrize(const Digraph& g);

/// Exact shortest-path betweenness (Brandes accumulation) on an unweighted
/// directed graph, endpoints excluded, ordered pairs counted once.
std::vector<double> betweenness_centrality(const Digraph& g);

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

/// Eigen-decomposition of a dense symmetric matrix (row-major n x n) by
/// cyclic Jacobi rotations. Pairs come back sorted by ascending eigenvalue,
/// unit-norm, with the first nonzero component positive.
std::vector<EigenPair> symmetric_eigen(std::vector<double> matrix, int n);

/// The m smallest eigenpairs of the combinatorial Laplacian D - A of a
/// connected undirected graph, skipping the constant eigenvector. Throws
/// an input error for disconnected graphs or m >= n.
std::vector<EigenPair> laplacian_eigens(const Digraph& undirected, int m);

}  // namespace optplan
