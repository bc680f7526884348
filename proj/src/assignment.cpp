#include "bipfunc/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bipfunc {

namespace detail {

std::vector<std::size_t> shortest_augmenting_path(const CostMatrix& costs,
                                                  std::span<const double> outlet) {
  const std::size_t n = costs.rows();
  const std::size_t m = costs.cols();
  const bool with_outlet = !outlet.empty();
  if (with_outlet && outlet.size() != n) throw std::invalid_argument("outlet size must equal row count");
  if (!with_outlet && n > m) throw std::invalid_argument("more rows than columns");
  for (double c : costs.data()) {
    if (!std::isfinite(c)) throw std::invalid_argument("cost matrix has a non-finite entry");
  }
  for (double c : outlet) {
    if (!std::isfinite(c)) throw std::invalid_argument("outlet cost is not finite");
  }
  if (n == 0) return {};

  // 1-based columns; column 0 is the virtual root of each search. Columns
  // m+1..m+n are the row outlets.
  const std::size_t total = with_outlet ? m + n : m;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(total + 1, 0.0), minv(total + 1);
  std::vector<std::size_t> owner(total + 1, 0), way(total + 1, 0);
  std::vector<char> used(total + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      const double ui = u[i0];
      const double* row = costs.data().data() + (i0 - 1) * m;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - ui - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
      }
      if (with_outlet) {
        const std::size_t jp = m + i0;
        if (!used[jp]) {
          const double cur = outlet[i0 - 1] - ui - v[jp];
          if (cur < minv[jp]) {
            minv[jp] = cur;
            way[jp] = j0;
          }
        }
      }
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= total; ++j) {
        if (!used[j] && minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 == 0) throw std::logic_error("assignment search found no augmenting path");
      for (std::size_t j = 0; j <= total; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of_row(n, m);
  for (std::size_t j = 1; j <= total; ++j) {
    if (owner[j] == 0) continue;
    col_of_row[owner[j] - 1] = j <= m ? j - 1 : m;
  }
  return col_of_row;
}

}  // namespace detail

Assignment assignment_min_cost(const CostMatrix& costs) {
  if (costs.rows() != costs.cols()) throw std::invalid_argument("assignment needs a square matrix");
  Assignment result;
  result.col_of_row = detail::shortest_augmenting_path(costs);
  for (std::size_t i = 0; i < costs.rows(); ++i) result.cost += costs(i, result.col_of_row[i]);
  return result;
}

}  // namespace bipfunc
