#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bipfunc {

// Dense row-major cost matrix.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<std::size_t> col_of_row;
  double cost = 0.0;
};

// Exact minimum-cost perfect assignment on a square matrix of finite entries.
Assignment assignment_min_cost(const CostMatrix& costs);

namespace detail {

// Shortest augmenting paths with dual potentials (one Dijkstra-like sweep per
// row over the dense matrix). Requires rows <= cols unless `outlet` is given.
//
// `outlet`, when non-empty, gives every row i a private extra column of cost
// outlet[i]; a row assigned there gets col_of_row[i] == cols(). This is the
// rectangular problem with one interchangeable "elsewhere" option per row,
// without materializing the extra columns.
std::vector<std::size_t> shortest_augmenting_path(const CostMatrix& costs,
                                                  std::span<const double> outlet = {});

}  // namespace detail

}  // namespace bipfunc
