#pragma once

#include "bipfunc/assignment.hpp"
#include "bipfunc/geometry.hpp"
#include "bipfunc/graph_opt.hpp"
#include "bipfunc/matching.hpp"

namespace bipfunc {

// Cost of sending x to the boundary of s: q (d(x, ds)^p + eps^p).
double boundary_penalty(PointView x, const BoxRegion& s, const CostParams& params);

// Exact penalized boundary matching: every point is either matched to a
// point of the other side at |x - y|^p or sent to the boundary at its
// penalty. Solved as a rectangular assignment in which each X point owns a
// private boundary column, plus the penalties of all Y points, minus those
// of the matched ones.
SolveResult boundary_matching_cost(const PointCloud& x, const PointCloud& y, const CostParams& params,
                                   const BoxRegion& s);

// The square (m+n) x (m+n) form of the same problem: real pairs, X to a
// dummy column, dummy row to Y, dummy to dummy at 0.
CostMatrix boundary_matching_reduction(const PointCloud& x, const PointCloud& y, const CostParams& params,
                                       const BoxRegion& s);

// Default augmentation cap 2 (m + n) + kappa0.
int default_aug_cap(std::size_t m, std::size_t n, const GraphFamily& family);

// Boundary functional of a graph family: X and Y are padded with exterior
// points (all collapsed to one virtual node, since exterior-exterior edges
// cost 0 and interior-exterior edges only depend on the interior endpoint)
// so that both sides have N >= kappa0 points, and the family functional is
// minimized with edge cost |x - y|^p inside and the penalty across. Padding
// is limited to `aug_cap` points per side (negative selects the default).
// `exact` is set when aug_cap >= m + n + kappa0.
SolveResult boundary_generic_cost(const PointCloud& x, const PointCloud& y, const GraphFamily& family,
                                  const CostParams& params, const BoxRegion& s, int aug_cap = -1);

}  // namespace bipfunc
