#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bipfunc {

using Point = std::vector<double>;
using PointView = std::span<const double>;

// A finite multiset of points in R^d. Storage is a flat row-major array;
// duplicates are allowed and the order of points never affects a cost.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(int dim);
  PointCloud(int dim, std::vector<double> flat);

  static PointCloud FromPoints(int dim, const std::vector<Point>& points);

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return data_.empty(); }

  PointView operator[](std::size_t i) const {
    return PointView(data_.data() + i * dim_, static_cast<std::size_t>(dim_));
  }

  void push_back(PointView p);
  void append(const PointCloud& other);
  void reserve(std::size_t n) { data_.reserve(n * dim_); }

  // Subset in the given index order.
  PointCloud select(std::span<const std::size_t> indices) const;

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  int dim_ = 0;
  std::vector<double> data_;
};

double squared_dist(PointView x, PointView y);
double euclid_dist(PointView x, PointView y);
double euclid_norm(PointView x);

// Axis-aligned box. Membership in a partition uses [lo, hi); distances to the
// boundary use the closed box.
class BoxRegion {
 public:
  BoxRegion(Point lo, Point hi);

  static BoxRegion UnitCube(int dim) { return Cube(dim, 0.0, 1.0); }
  static BoxRegion Cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lo_.size()); }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  double side(int axis) const { return hi_[axis] - lo_[axis]; }
  double volume() const;

  bool contains(PointView x) const;            // closed
  bool contains_half_open(PointView x) const;  // [lo, hi)

  friend bool operator==(const BoxRegion&, const BoxRegion&) = default;

 private:
  Point lo_;
  Point hi_;
};

double boundary_dist(PointView x, const BoxRegion& s);

double diameter(const PointCloud& points);
double diameter(const BoxRegion& box);

// 2^{level*d} congruent subboxes of `root`. Cells are ordered
// lexicographically by their per-axis index, axis 0 most significant.
class DyadicPartition {
 public:
  DyadicPartition(BoxRegion root, int level);

  const BoxRegion& root() const { return root_; }
  int level() const { return level_; }
  int per_axis() const { return per_axis_; }
  const std::vector<BoxRegion>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  // Index of the cell containing x (x must lie in the closed root). Shared
  // faces go to the cell above them; the root's upper faces are folded into
  // the last cell along each axis.
  std::size_t cell_of(PointView x) const;

  // Splits a cloud into one cloud per cell; `origin`, if given, receives the
  // source index of every point, cell by cell.
  std::vector<PointCloud> split(const PointCloud& cloud,
                                std::vector<std::vector<std::size_t>>* origin = nullptr) const;

 private:
  BoxRegion root_;
  int level_;
  int per_axis_;
  std::vector<BoxRegion> cells_;
};

DyadicPartition dyadic_partition(const BoxRegion& root, int level);

}  // namespace bipfunc
