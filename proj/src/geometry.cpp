#include "bipfunc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bipfunc {

namespace {

void require_finite(std::span<const double> coords) {
  for (double c : coords) {
    if (!std::isfinite(c)) throw std::invalid_argument("point coordinate is not finite");
  }
}

void require_same_dim(PointView x, PointView y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()));
  }
}

}  // namespace

PointCloud::PointCloud(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("point cloud dimension must be >= 1");
}

PointCloud::PointCloud(int dim, std::vector<double> flat) : dim_(dim), data_(std::move(flat)) {
  if (dim < 1) throw std::invalid_argument("point cloud dimension must be >= 1");
  if (data_.size() % dim != 0) {
    throw std::invalid_argument("flat coordinate array is not a multiple of the dimension");
  }
  require_finite(data_);
}

PointCloud PointCloud::FromPoints(int dim, const std::vector<Point>& points) {
  PointCloud cloud(dim);
  cloud.reserve(points.size());
  for (const auto& p : points) cloud.push_back(p);
  return cloud;
}

void PointCloud::push_back(PointView p) {
  if (static_cast<int>(p.size()) != dim_) {
    throw std::invalid_argument("point has dimension " + std::to_string(p.size()) +
                                ", cloud has " + std::to_string(dim_));
  }
  require_finite(p);
  data_.insert(data_.end(), p.begin(), p.end());
}

void PointCloud::append(const PointCloud& other) {
  if (other.empty()) return;
  if (other.dim_ != dim_) throw std::invalid_argument("dimension mismatch in append");
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
}

PointCloud PointCloud::select(std::span<const std::size_t> indices) const {
  PointCloud out(dim_);
  out.reserve(indices.size());
  for (std::size_t i : indices) out.data_.insert(out.data_.end(), (*this)[i].begin(), (*this)[i].end());
  return out;
}

double squared_dist(PointView x, PointView y) {
  require_same_dim(x, y);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double t = x[k] - y[k];
    s += t * t;
  }
  return s;
}

double euclid_dist(PointView x, PointView y) { return std::sqrt(squared_dist(x, y)); }

double euclid_norm(PointView x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

BoxRegion::BoxRegion(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.empty() || lo_.size() != hi_.size()) {
    throw std::invalid_argument("box corners must share a positive dimension");
  }
  require_finite(lo_);
  require_finite(hi_);
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!(lo_[i] < hi_[i])) throw std::invalid_argument("box requires lo < hi on every axis");
  }
}

BoxRegion BoxRegion::Cube(int dim, double lo, double hi) {
  return BoxRegion(Point(dim, lo), Point(dim, hi));
}

double BoxRegion::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= side(i);
  return v;
}

bool BoxRegion::contains(PointView x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
  }
  return true;
}

bool BoxRegion::contains_half_open(PointView x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < lo_[i] || x[i] >= hi_[i]) return false;
  }
  return true;
}

double boundary_dist(PointView x, const BoxRegion& s) {
  require_same_dim(x, s.lo());
  if (!s.contains(x)) throw std::invalid_argument("point lies outside the box");
  double best = s.hi()[0] - s.lo()[0];
  for (int i = 0; i < s.dim(); ++i) {
    best = std::min(best, std::min(x[i] - s.lo()[i], s.hi()[i] - x[i]));
  }
  return best;
}

double diameter(const PointCloud& points) {
  if (points.empty()) throw std::invalid_argument("diameter of an empty set");
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::max(best, squared_dist(points[i], points[j]));
    }
  }
  return std::sqrt(best);
}

double diameter(const BoxRegion& box) { return euclid_dist(box.lo(), box.hi()); }

DyadicPartition::DyadicPartition(BoxRegion root, int level)
    : root_(std::move(root)), level_(level), per_axis_(0) {
  if (level < 0) throw std::invalid_argument("partition level must be non-negative");
  const int d = root_.dim();
  if (level >= 30 || static_cast<long double>(level) * d > 40) {
    throw std::invalid_argument("partition level too large");
  }
  per_axis_ = 1 << level;
  for (int a = 0; a < d; ++a) {
    const double side = root_.side(a) / per_axis_;
    if (!(side > 0.0) || root_.lo()[a] + side == root_.lo()[a]) {
      throw std::invalid_argument("partition cell side underflows");
    }
  }
  std::size_t count = 1;
  for (int a = 0; a < d; ++a) count *= per_axis_;
  cells_.reserve(count);
  std::vector<int> idx(d, 0);
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t rest = c;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rest % per_axis_);
      rest /= per_axis_;
    }
    Point lo(d), hi(d);
    for (int a = 0; a < d; ++a) {
      const double side = root_.side(a);
      lo[a] = root_.lo()[a] + side * idx[a] / per_axis_;
      hi[a] = idx[a] + 1 == per_axis_ ? root_.hi()[a] : root_.lo()[a] + side * (idx[a] + 1) / per_axis_;
    }
    cells_.emplace_back(std::move(lo), std::move(hi));
  }
}

std::size_t DyadicPartition::cell_of(PointView x) const {
  if (!root_.contains(x)) throw std::invalid_argument("point lies outside the partition root");
  std::size_t index = 0;
  for (int a = 0; a < root_.dim(); ++a) {
    const double side = root_.side(a);
    int k = static_cast<int>(std::floor((x[a] - root_.lo()[a]) / side * per_axis_));
    k = std::clamp(k, 0, per_axis_ - 1);
    // The floating-point quotient can land one cell off near a face; settle
    // it against the stored cell bounds so that cell_of agrees with the cells.
    const auto lo_of = [&](int j) { return root_.lo()[a] + side * j / per_axis_; };
    while (k > 0 && x[a] < lo_of(k)) --k;
    while (k + 1 < per_axis_ && x[a] >= lo_of(k + 1)) ++k;
    index = index * per_axis_ + k;
  }
  return index;
}

std::vector<PointCloud> DyadicPartition::split(
    const PointCloud& cloud, std::vector<std::vector<std::size_t>>* origin) const {
  std::vector<PointCloud> parts(cells_.size(), PointCloud(root_.dim()));
  if (origin) origin->assign(cells_.size(), {});
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const std::size_t c = cell_of(cloud[i]);
    parts[c].push_back(cloud[i]);
    if (origin) (*origin)[c].push_back(i);
  }
  return parts;
}

DyadicPartition dyadic_partition(const BoxRegion& root, int level) {
  return DyadicPartition(root, level);
}

}  // namespace bipfunc
