#include "bipfunc/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bipfunc/errors.hpp"

namespace bipfunc {

void fill_unmatched(SolveResult& r, std::size_t nx, std::size_t ny) {
  std::vector<char> used_x(nx, 0), used_y(ny, 0);
  for (auto [i, j] : r.matched) {
    used_x[i] = 1;
    used_y[j] = 1;
  }
  for (std::size_t i : r.boundary_x) used_x[i] = 1;
  for (std::size_t j : r.boundary_y) used_y[j] = 1;
  r.unmatched_x.clear();
  r.unmatched_y.clear();
  for (std::size_t i = 0; i < nx; ++i) if (!used_x[i]) r.unmatched_x.push_back(i);
  for (std::size_t j = 0; j < ny; ++j) if (!used_y[j]) r.unmatched_y.push_back(j);
}

void require_same_dim(const PointCloud& x, const PointCloud& y) {
  if (!x.empty() && !y.empty() && x.dim() != y.dim()) {
    throw std::invalid_argument("dimension mismatch between X and Y");
  }
}

bool x_is_rows(const PointCloud& x, const PointCloud& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return !std::lexicographical_compare(y.data().begin(), y.data().end(), x.data().begin(),
                                       x.data().end());
}

CostParams::CostParams(double p, double eps) : p_(p), q_(0.0), eps_(eps) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("exponent p must be positive");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be non-negative");
  q_ = p < 1.0 ? std::exp2(p - 1.0) : 1.0;
}

double pow_dist(PointView x, PointView y, double p) {
  const double d2 = squared_dist(x, y);
  if (p == 2.0) return d2;
  if (p == 1.0) return std::sqrt(d2);
  return std::pow(d2, 0.5 * p);
}

double edge_cost_sum(const PointCloud& x, const PointCloud& y, const SolveResult& r, double p) {
  double total = 0.0;
  for (auto [i, j] : r.matched) total += pow_dist(x[i], y[j], p);
  return total;
}

CostMatrix power_cost_matrix(const PointCloud& x, const PointCloud& y, double p) {
  require_same_dim(x, y);
  CostMatrix c(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) c(i, j) = pow_dist(x[i], y[j], p);
  }
  return c;
}

SolveResult m_p_cost(const PointCloud& x, const PointCloud& y, const CostParams& params) {
  require_same_dim(x, y);
  SolveResult r;
  if (x.empty() || y.empty()) {
    fill_unmatched(r, x.size(), y.size());
    return r;
  }
  const bool rows_x = x_is_rows(x, y);
  const PointCloud& rows = rows_x ? x : y;
  const PointCloud& cols = rows_x ? y : x;
  const CostMatrix c = power_cost_matrix(rows, cols, params.p());
  const auto col_of_row = detail::shortest_augmenting_path(c);
  r.matched.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    r.cost += c(i, col_of_row[i]);
    r.matched.emplace_back(rows_x ? IndexPair{i, col_of_row[i]} : IndexPair{col_of_row[i], i});
  }
  std::sort(r.matched.begin(), r.matched.end());
  fill_unmatched(r, x.size(), y.size());
  return r;
}

SolveResult brute_force_matching(const PointCloud& x, const PointCloud& y, const CostParams& params) {
  require_same_dim(x, y);
  const bool rows_x = x.size() <= y.size();
  const PointCloud& rows = rows_x ? x : y;
  const PointCloud& cols = rows_x ? y : x;
  if (rows.size() > 8) throw SizeLimitError("brute-force matching is limited to 8 points on the smaller side");
  SolveResult r;
  if (rows.empty()) {
    fill_unmatched(r, x.size(), y.size());
    return r;
  }
  const CostMatrix c = power_cost_matrix(rows, cols, params.p());
  std::vector<std::size_t> current(rows.size()), best;
  std::vector<char> taken(cols.size(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  auto recurse = [&](auto&& self, std::size_t i, double acc) -> void {
    if (i == rows.size()) {
      if (acc < best_cost) {
        best_cost = acc;
        best = current;
      }
      return;
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (taken[j]) continue;
      taken[j] = 1;
      current[i] = j;
      self(self, i + 1, acc + c(i, j));
      taken[j] = 0;
    }
  };
  recurse(recurse, 0, 0.0);
  r.cost = best_cost;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    r.matched.emplace_back(rows_x ? IndexPair{i, best[i]} : IndexPair{best[i], i});
  }
  std::sort(r.matched.begin(), r.matched.end());
  fill_unmatched(r, x.size(), y.size());
  return r;
}

SolveResult monotone_matching_1d(const PointCloud& x, const PointCloud& y, const CostParams& params) {
  if ((!x.empty() && x.dim() != 1) || (!y.empty() && y.dim() != 1)) {
    throw std::invalid_argument("monotone matching needs one-dimensional points");
  }
  if (x.size() != y.size()) throw std::invalid_argument("monotone matching needs |X| = |Y|");
  if (params.p() < 1.0) throw std::invalid_argument("monotone matching is optimal only for p >= 1");
  auto order = [](const PointCloud& c) {
    std::vector<std::size_t> idx(c.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return c[a][0] < c[b][0]; });
    return idx;
  };
  const auto ox = order(x), oy = order(y);
  SolveResult r;
  for (std::size_t k = 0; k < ox.size(); ++k) {
    r.cost += pow_dist(x[ox[k]], y[oy[k]], params.p());
    r.matched.emplace_back(ox[k], oy[k]);
  }
  std::sort(r.matched.begin(), r.matched.end());
  return r;
}

}  // namespace bipfunc
