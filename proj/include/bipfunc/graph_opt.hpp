#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bipfunc/geometry.hpp"
#include "bipfunc/matching.hpp"

namespace bipfunc {

enum class FamilyKind { Matching, TspTour, SpanningTreeMaxDeg, RRegularConnected };

// Admissible bipartite graph class with its constants: kappa0 is the smallest
// n with a nonempty class, kappa the merge/restriction edge budget.
struct GraphFamily {
  FamilyKind kind = FamilyKind::Matching;
  int param = 0;  // max degree for trees, r for r-regular graphs
  int kappa0 = 1;
  int kappa = 0;

  static GraphFamily Matching() { return {FamilyKind::Matching, 0, 1, 0}; }
  static GraphFamily TspTour() { return {FamilyKind::TspTour, 0, 2, 4}; }
  static GraphFamily SpanningTree(int max_degree);
  static GraphFamily RRegular(int r);

  // Largest vertex degree a member may have.
  int degree_bound() const;

  // "matching", "tsp", "tree:<deg>", "rreg:<r>".
  std::string tag() const;
  static GraphFamily FromTag(const std::string& tag);

  friend bool operator==(const GraphFamily&, const GraphFamily&) = default;
};

// Simple bipartite graph on rows [n] (X) and columns [n] (Y).
struct BipartiteGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // sorted, no repeats

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;
};

bool is_member(const BipartiteGraph& g, const GraphFamily& family);

// Every member of the class on n + n vertices; n <= 5.
std::vector<BipartiteGraph> enumerate_family(int n, const GraphFamily& family);

// The graph spanned by a certificate's edges, with X and Y indices relabeled
// densely in increasing order. Used to re-validate solver output.
BipartiteGraph certificate_graph(const SolveResult& r);

// Minimum over G in the class on m + m vertices (m = smaller cardinality) and
// over injections of the smaller side into the larger. 0 below kappa0.
SolveResult generic_cost(const PointCloud& x, const PointCloud& y, const GraphFamily& family,
                         const CostParams& params);

// Alternating Held-Karp recursion for |X| = |Y| <= 12.
SolveResult tsp_exact_dp(const PointCloud& x, const PointCloud& y, const CostParams& params);

// Greedy alternating construction plus alternation-preserving 2-opt.
// |X| = |Y| >= 2. The result is a feasible tour, not necessarily optimal.
SolveResult tsp_heuristic(const PointCloud& x, const PointCloud& y, const CostParams& params);

struct AxiomReport {
  GraphFamily family;
  int n_max = 0;
  int observed_kappa0 = -1;  // smallest n <= n_max with a member, -1 if none
  bool nonempty_ok = true;
  int max_degree = 0;
  bool degree_ok = true;
  // Worst case, over the checked pairs, of the smallest symmetric difference
  // between G + G' and a member of the merged class.
  int merge_changes = 0;
  int merge_empty_changes = 0;  // G' the empty graph, 1 <= m < kappa0
  int restriction_changes = 0;
  bool merge_ok = true;
  bool restriction_ok = true;

  bool ok() const { return nonempty_ok && degree_ok && merge_ok && restriction_ok; }
};

// Exhaustive check of non-emptiness, bounded degree, merging and restriction
// for all n, m with n + m <= n_max <= 5. A symmetric difference of 2 kappa
// means kappa edges removed and kappa added.
AxiomReport check_axioms(const GraphFamily& family, int n_max);

}  // namespace bipfunc
