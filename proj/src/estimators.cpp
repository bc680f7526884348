#include "bipfunc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "bipfunc/boundary.hpp"

namespace bipfunc {

namespace {

constexpr double kSlack = 1e-9;

}  // namespace

Functional family_functional(const GraphFamily& family) {
  return [family](const PointCloud& x, const PointCloud& y, double p) {
    return generic_cost(x, y, family, CostParams(p)).cost;
  };
}

double subadditivity_constant(const GraphFamily& family) {
  if (family.kind == FamilyKind::Matching) return 0.5;
  return (3.0 + family.kappa0) * family.kappa / 2.0;
}

PartitionBound partition_upper_bound(const PointCloud& x, const PointCloud& y, const BoxRegion& root, int level,
                                     const Functional& functional, double p, double C) {
  if (!functional) throw std::invalid_argument("no functional given");
  if (!(C >= 0.0) || !std::isfinite(C)) throw std::invalid_argument("subadditivity constant must be finite and >= 0");
  const DyadicPartition part(root, level);
  const auto xs = part.split(x);
  const auto ys = part.split(y);
  const double scale = C * std::pow(diameter(root), p);
  PartitionBound out;
  out.value = functional(x, y, p);
  for (std::size_t c = 0; c < part.size(); ++c) {
    CellTerm t;
    t.cell = c;
    t.nx = xs[c].size();
    t.ny = ys[c].size();
    if (t.nx + t.ny > 0) {
      t.value = functional(xs[c], ys[c], p);
      t.excess = scale * (1.0 + static_cast<double>(t.nx > t.ny ? t.nx - t.ny : t.ny - t.nx));
    }
    out.bound += t.value + t.excess;
    out.per_cell.push_back(t);
  }
  out.holds = out.value <= out.bound + kSlack;
  return out;
}

PartitionBound partition_upper_bound(const PointCloud& x, const PointCloud& y, const BoxRegion& root, int level,
                                     const GraphFamily& family, const CostParams& params) {
  return partition_upper_bound(x, y, root, level, family_functional(family), params.p(),
                               subadditivity_constant(family));
}

PartitionBound boundary_lower_bound(const PointCloud& x, const PointCloud& y, const BoxRegion& root, int level,
                                    const CostParams& params) {
  const DyadicPartition part(root, level);
  const auto xs = part.split(x);
  const auto ys = part.split(y);
  PartitionBound out;
  out.value = boundary_matching_cost(x, y, params, root).cost;
  for (std::size_t c = 0; c < part.size(); ++c) {
    CellTerm t;
    t.cell = c;
    t.nx = xs[c].size();
    t.ny = ys[c].size();
    if (t.nx + t.ny > 0) t.value = boundary_matching_cost(xs[c], ys[c], params, part.cells()[c]).cost;
    out.bound += t.value;
    out.per_cell.push_back(t);
  }
  out.holds = out.value + kSlack >= out.bound;
  return out;
}

std::vector<PartitionBound> iterated_partition_upper_bound(const PointCloud& x, const PointCloud& y,
                                                           const BoxRegion& root, int max_level,
                                                           const GraphFamily& family, const CostParams& params) {
  if (max_level < 1) throw std::invalid_argument("max_level must be >= 1");
  std::vector<PartitionBound> out;
  for (int level = 1; level <= max_level; ++level) {
    out.push_back(partition_upper_bound(x, y, root, level, family, params));
  }
  return out;
}

SizeBoundReport size_bound_check(const std::vector<SizeSample>& samples, const BoxRegion& q,
                                 const Functional& functional, double p) {
  std::map<double, std::vector<double>> by_nu;
  for (const auto& s : samples) {
    if (!(s.nu > 0.0)) throw std::invalid_argument("intensity must be positive");
    by_nu[s.nu].push_back(functional(s.x, s.y, p));
  }
  const double dp = std::pow(diameter(q), p);
  const double d = q.dim();
  SizeBoundReport rep;
  for (const auto& [nu, vals] : by_nu) {
    SizeBoundRow row;
    row.nu = nu;
    row.count = vals.size();
    double sum = 0.0;
    for (double v : vals) sum += v;
    row.mean = sum / vals.size();
    if (vals.size() > 1) {
      double ss = 0.0;
      for (double v : vals) ss += (v - row.mean) * (v - row.mean);
      row.stderr_ = std::sqrt(ss / (vals.size() - 1) / vals.size());
    }
    row.ratio = row.mean / (dp * std::min(nu, std::pow(nu, 1.0 - p / d)));
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  // slope over rows with a positive ratio
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (const auto& row : rep.rows) {
    if (!(row.ratio > 0.0)) continue;
    const double lx = std::log(row.nu), ly = std::log(row.ratio);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k >= 2 && k * sxx - sx * sx > 0.0) rep.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  rep.bounded = rep.slope <= 0.02 && std::isfinite(rep.max_ratio);
  return rep;
}

}  // namespace bipfunc
