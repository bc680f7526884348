#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "bipfunc/assignment.hpp"
#include "bipfunc/geometry.hpp"

namespace bipfunc {

// Exponent p of the edge cost |x - y|^p, with the boundary weight
// q = min(2^{p-1}, 1) derived from it and the boundary penalty eps.
class CostParams {
 public:
  explicit CostParams(double p, double eps = 0.0);

  double p() const { return p_; }
  double q() const { return q_; }
  double eps() const { return eps_; }

 private:
  double p_;
  double q_;
  double eps_;
};

// |x - y|^p.
double pow_dist(PointView x, PointView y, double p);

using IndexPair = std::pair<std::size_t, std::size_t>;

// Certificate returned by every solver. For matchings `matched` lists the
// matched pairs; for other graph families it lists the graph's edges between
// X and Y, so an index may occur more than once. Edges that leave the region
// in a boundary functional are recorded once per edge in boundary_x or
// boundary_y.
struct SolveResult {
  double cost = 0.0;
  std::vector<IndexPair> matched;
  std::vector<std::size_t> boundary_x;
  std::vector<std::size_t> boundary_y;
  std::vector<std::size_t> unmatched_x;
  std::vector<std::size_t> unmatched_y;
  bool exact = true;
  // Exterior points added by the generic boundary functional.
  std::size_t augmented_x = 0;
  std::size_t augmented_y = 0;
};

// Sum of |X_i - Y_j|^p over `matched` (boundary terms excluded).
double edge_cost_sum(const PointCloud& x, const PointCloud& y, const SolveResult& r, double p);

// Recomputes unmatched_x / unmatched_y as the indices that occur neither in
// `matched` nor in the boundary lists.
void fill_unmatched(SolveResult& r, std::size_t nx, std::size_t ny);

// True when X should play the row role: the smaller side, with equal sizes
// ordered by coordinates so that (X, Y) and (Y, X) run the same solve.
bool x_is_rows(const PointCloud& x, const PointCloud& y);

// Throws std::invalid_argument when both clouds are nonempty with different
// dimensions.
void require_same_dim(const PointCloud& x, const PointCloud& y);

CostMatrix power_cost_matrix(const PointCloud& x, const PointCloud& y, double p);

// Minimum over injections of the smaller side into the larger of
// sum |X_i - Y_sigma(i)|^p. Zero when either side is empty.
SolveResult m_p_cost(const PointCloud& x, const PointCloud& y, const CostParams& params);

// Exhaustive minimum over all injections; refuses min(|X|, |Y|) > 8.
SolveResult brute_force_matching(const PointCloud& x, const PointCloud& y, const CostParams& params);

// Sorted-to-sorted matching on the line; optimal for p >= 1 and |X| = |Y|.
SolveResult monotone_matching_1d(const PointCloud& x, const PointCloud& y, const CostParams& params);

}  // namespace bipfunc
