#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "bipfunc/sampling.hpp"

using namespace bipfunc;

TEST_CASE("zero intensity gives empty clouds") {
  const auto [x, y] = sample_pair({MeasureSpec{UniformBox{BoxRegion::UnitCube(2)}}, 0.0, true, 9});
  CHECK(x.empty());
  CHECK(y.empty());
}

TEST_CASE("fixed-size samples stay in the box") {
  const auto box = BoxRegion::UnitCube(3);
  const auto [x, y] = sample_pair({MeasureSpec{UniformBox{box}}, 100, false, 1});
  REQUIRE(x.size() == 100);
  REQUIRE(y.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(box.contains_half_open(x[i]));
    CHECK(box.contains_half_open(y[i]));
  }
  CHECK_THROWS_AS(sample_pair({MeasureSpec{UniformBox{box}}, 2.5, false, 1}), std::invalid_argument);
}

TEST_CASE("same seed gives identical clouds, different seeds differ") {
  const SampleConfig cfg{MeasureSpec{UniformBox{BoxRegion::UnitCube(2)}}, 40, true, 77};
  CHECK(sample_pair(cfg) == sample_pair(cfg));
  SampleConfig other = cfg;
  other.seed = 78;
  CHECK_FALSE(sample_pair(cfg).first == sample_pair(other).first);
}

TEST_CASE("fixed and poissonized samples share their leading points") {
  const MeasureSpec m{UniformBox{BoxRegion::UnitCube(3)}};
  const auto [fx, fy] = sample_pair({m, 50, false, 5});
  const auto [px, py] = sample_pair({m, 50, true, 5});
  for (std::size_t i = 0; i < std::min(fx.size(), px.size()); ++i) CHECK(fx[i][0] == px[i][0]);
  for (std::size_t i = 0; i < std::min(fy.size(), py.size()); ++i) CHECK(fy[i][2] == py[i][2]);
}

TEST_CASE("degenerate block weights put all mass in one cell") {
  const auto part = dyadic_partition(BoxRegion::UnitCube(2), 1);
  const MeasureSpec m{BlockDensity{part, {1, 0, 0, 0}}};
  const auto [x, y] = sample_pair({m, 50, false, 3});
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(part.cell_of(x[i]) == 0);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(part.cell_of(y[i]) == 0);
}

TEST_CASE("block density frequencies pass a chi-square test") {
  const auto part = dyadic_partition(BoxRegion::UnitCube(2), 1);
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  const auto [x, y] = sample_pair({MeasureSpec{BlockDensity{part, w}}, 100000, false, 11});
  std::vector<double> count(4, 0);
  for (std::size_t i = 0; i < x.size(); ++i) ++count[part.cell_of(x[i])];
  double chi2 = 0;
  for (int k = 0; k < 4; ++k) chi2 += std::pow(count[k] - 1e5 * w[k], 2) / (1e5 * w[k]);
  const double crit = boost::math::quantile(boost::math::complement(boost::math::chi_squared(3), 1e-6));
  CHECK(chi2 < crit);
}

TEST_CASE("weights must be normalized") {
  const auto part = dyadic_partition(BoxRegion::UnitCube(1), 1);
  CHECK_THROWS_AS(validate(MeasureSpec{BlockDensity{part, {0.5, 0.6}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(MeasureSpec{BlockDensity{part, {1.5, -0.5}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(MeasureSpec{HeavyTailRadial{0.0, 2}}), std::invalid_argument);
  CHECK_NOTHROW(validate(MeasureSpec{BlockDensity{part, {0.5, 0.5 + 1e-13}}}));
}

TEST_CASE("segment samples lie on the segment") {
  const Point a{0.1, 0.2, 0.3}, b{0.9, 0.4, 0.8};
  const auto [x, y] = sample_pair({MeasureSpec{SingularSegment{a, b}}, 200, false, 2});
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = (x[i][0] - a[0]) / (b[0] - a[0]);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(x[i][k] - (a[k] + t * (b[k] - a[k]))) <= 1e-12);
  }
}

TEST_CASE("cantor samples avoid the removed middle thirds") {
  const auto [x, y] = sample_pair({MeasureSpec{CantorMeasure{}}, 500, false, 8});
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = x[i][0];
    for (int level = 0; level < 5; ++level) {
      v *= 3;
      const double digit = std::floor(v);
      CHECK(digit != 1.0);
      v -= digit;
    }
  }
}

TEST_CASE("heavy tail satisfies the tail bound with c = 1") {
  const double alpha = 3.0;
  const auto [x, y] = sample_pair({MeasureSpec{HeavyTailRadial{alpha, 3}}, 200000, false, 21});
  for (double t : {1.5, 2.0, 4.0, 8.0}) {
    std::size_t above = 0;
    for (std::size_t i = 0; i < x.size(); ++i) above += euclid_norm(x[i]) > t;
    const double freq = double(above) / x.size();
    const double p = std::pow(t, -alpha);
    // binomial 5-sigma band around the exact tail
    CHECK(freq <= p + 5 * std::sqrt(p * (1 - p) / x.size()));
    CHECK(freq >= p - 5 * std::sqrt(p * (1 - p) / x.size()));
  }
}

TEST_CASE("mixtures draw from every component") {
  const MeasureSpec cube{UniformBox{BoxRegion::UnitCube(3)}};
  const MeasureSpec seg{SingularSegment{Point{2, 2, 2}, Point{3, 3, 3}}};
  const MeasureSpec mix{Mixture{{0.5, 0.5}, {cube, seg}}};
  const auto [x, y] = sample_pair({mix, 1000, false, 4});
  std::size_t on_seg = 0;
  for (std::size_t i = 0; i < x.size(); ++i) on_seg += x[i][0] >= 2.0;
  CHECK(on_seg > 400);
  CHECK(on_seg < 600);
  CHECK(support_box(mix)->hi()[0] == 3.0);
  CHECK_FALSE(support_box(MeasureSpec{HeavyTailRadial{2.0, 2}}).has_value());
}

TEST_CASE("max_radius") {
  CHECK(max_radius(PointCloud(2), PointCloud(2)) == 0.0);
  CHECK(max_radius(PointCloud::FromPoints(2, {{3, 4}}), PointCloud(2)) == 5.0);
  const auto [x, y] = sample_pair({MeasureSpec{UniformBox{BoxRegion::UnitCube(2)}}, 20, false, 6});
  double best = 0;
  for (std::size_t i = 0; i < 20; ++i) best = std::max({best, std::hypot(x[i][0], x[i][1]), std::hypot(y[i][0], y[i][1])});
  CHECK(max_radius(x, y) == doctest::Approx(best).epsilon(1e-15));
}
