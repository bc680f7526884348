#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "bipfunc/geometry.hpp"
#include "bipfunc/graph_opt.hpp"
#include "bipfunc/matching.hpp"

namespace bipfunc {

// A bipartite functional L(X, Y) with edge exponent p.
using Functional = std::function<double(const PointCloud& x, const PointCloud& y, double p)>;

// Exact functional of a graph family (m_p_cost for matchings).
Functional family_functional(const GraphFamily& family);

// Constant of the subadditivity property: 1/2 for matchings,
// (3 + kappa0) kappa / 2 for the other families.
double subadditivity_constant(const GraphFamily& family);

struct CellTerm {
  std::size_t cell = 0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  double value = 0.0;   // functional on the cell's points
  double excess = 0.0;  // C diam(Q)^p (1 + |nx - ny|) for nonempty cells, else 0
};

struct PartitionBound {
  double value = 0.0;  // functional at the root
  double bound = 0.0;  // sum over cells of value + excess (upper) or value (lower)
  bool holds = true;
  std::vector<CellTerm> per_cell;
};

// L(X, Y) <= sum_P L(X n P, Y n P) + C diam(Q)^p sum_P 1{P nonempty}(1 + |X(P) - Y(P)|)
// over the dyadic partition of `root` at `level`, with 1e-9 absolute slack.
PartitionBound partition_upper_bound(const PointCloud& x, const PointCloud& y, const BoxRegion& root, int level,
                                     const Functional& functional, double p, double C);
PartitionBound partition_upper_bound(const PointCloud& x, const PointCloud& y, const BoxRegion& root, int level,
                                     const GraphFamily& family, const CostParams& params);

// Boundary matching superadditivity: L_dQ(X, Y) >= sum_P L_dP(X n P, Y n P).
PartitionBound boundary_lower_bound(const PointCloud& x, const PointCloud& y, const BoxRegion& root, int level,
                                    const CostParams& params);

// The upper bound applied at each level 1..max_level of successively finer
// partitions.
std::vector<PartitionBound> iterated_partition_upper_bound(const PointCloud& x, const PointCloud& y,
                                                           const BoxRegion& root, int max_level,
                                                           const GraphFamily& family, const CostParams& params);

struct SizeSample {
  double nu = 0.0;  // expected number of points per side in Q
  PointCloud x;
  PointCloud y;
};

struct SizeBoundRow {
  double nu = 0.0;
  std::size_t count = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double ratio = 0.0;  // mean / (diam(Q)^p min(nu, nu^{1 - p/d}))
};

struct SizeBoundReport {
  std::vector<SizeBoundRow> rows;
  double max_ratio = 0.0;
  double slope = 0.0;  // least-squares slope of log ratio against log nu
  bool bounded = true;  // slope <= 0.02
};

// Groups the samples by nu (in increasing order) and checks that the
// normalized mean shows no growth trend.
SizeBoundReport size_bound_check(const std::vector<SizeSample>& samples, const BoxRegion& q,
                                 const Functional& functional, double p);

}  // namespace bipfunc
