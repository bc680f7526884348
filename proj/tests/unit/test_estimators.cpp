#include <doctest.h>

#include <cmath>

#include "bipfunc/boundary.hpp"
#include "bipfunc/estimators.hpp"
#include "bipfunc/sampling.hpp"
#include "oracles.hpp"

using namespace bipfunc;

TEST_CASE("constants") {
  CHECK(subadditivity_constant(GraphFamily::Matching()) == 0.5);
  CHECK(subadditivity_constant(GraphFamily::TspTour()) == 10.0);
}

TEST_CASE("partition upper bound for matchings and tours") {
  StreamRng rng(41, 0);
  for (int t = 0; t < 80; ++t) {
    const int d = 1 + t % 3;
    const auto q = BoxRegion::UnitCube(d);
    const auto x = oracle::random_cloud(rng, d, rng() % 9), y = oracle::random_cloud(rng, d, rng() % 9);
    for (double p : {0.5, 1.0, 2.0}) {
      for (int level = 1; level <= 2; ++level) {
        const auto b = partition_upper_bound(x, y, q, level, GraphFamily::Matching(), CostParams(p));
        CHECK(b.holds);
        CHECK(b.value == m_p_cost(x, y, CostParams(p)).cost);
        std::size_t nx = 0, ny = 0;
        double total = 0;
        for (const auto& c : b.per_cell) {
          nx += c.nx;
          ny += c.ny;
          if (c.nx + c.ny == 0) CHECK(c.excess == 0.0);
          else
            CHECK(oracle::close_rel(c.excess, 0.5 * std::pow(std::sqrt(double(d)), p) *
                                                  (1.0 + std::abs(double(c.nx) - double(c.ny)))));
          total += c.value + c.excess;
        }
        CHECK(nx == x.size());
        CHECK(ny == y.size());
        CHECK(oracle::close_rel(total, b.bound));
      }
    }
    if (x.size() <= 6 && y.size() <= 6) {
      CHECK(partition_upper_bound(x, y, q, 1, GraphFamily::TspTour(), CostParams(1)).holds);
    }
  }
}

TEST_CASE("partition upper bound detects a functional that is not subadditive") {
  // counting pairs grows quadratically, so splitting always loses
  const Functional pairs = [](const PointCloud& x, const PointCloud& y, double) {
    return static_cast<double>(x.size() * y.size());
  };
  StreamRng rng(42, 0);
  const auto x = oracle::random_cloud(rng, 2, 40), y = oracle::random_cloud(rng, 2, 40);
  const auto b = partition_upper_bound(x, y, BoxRegion::UnitCube(2), 1, pairs, 1.0, 0.0);
  CHECK_FALSE(b.holds);
  CHECK_THROWS_AS(partition_upper_bound(x, y, BoxRegion::UnitCube(2), 1, Functional{}, 1.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(partition_upper_bound(x, y, BoxRegion::UnitCube(2), 1, pairs, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("boundary lower bound") {
  StreamRng rng(43, 0);
  for (int t = 0; t < 80; ++t) {
    const int d = 1 + t % 3;
    const auto q = BoxRegion::Cube(d, -1.0, 1.0);
    const auto x = oracle::random_cloud(rng, d, rng() % 12, -1, 1), y = oracle::random_cloud(rng, d, rng() % 12, -1, 1);
    for (double p : {0.5, 1.0, 2.0}) {
      const auto b = boundary_lower_bound(x, y, q, 1 + t % 2, CostParams(p));
      CHECK(b.holds);
      CHECK(b.bound <= b.value + 1e-9);
      CHECK(b.value == boundary_matching_cost(x, y, CostParams(p), q).cost);
    }
  }
}

TEST_CASE("iterated partition bound") {
  StreamRng rng(44, 0);
  const auto x = oracle::random_cloud(rng, 2, 30), y = oracle::random_cloud(rng, 2, 25);
  const auto all = iterated_partition_upper_bound(x, y, BoxRegion::UnitCube(2), 3, GraphFamily::Matching(), CostParams(1));
  REQUIRE(all.size() == 3);
  for (std::size_t k = 0; k < all.size(); ++k) {
    CHECK(all[k].holds);
    CHECK(all[k].per_cell.size() == std::size_t(1) << (2 * (k + 1)));
  }
  CHECK_THROWS_AS(iterated_partition_upper_bound(x, y, BoxRegion::UnitCube(2), 0, GraphFamily::Matching(),
                                                 CostParams(1)),
                  std::invalid_argument);
}

TEST_CASE("size bound check sees trends") {
  StreamRng rng(45, 0);
  const auto q = BoxRegion::UnitCube(2);
  std::vector<SizeSample> samples;
  for (double nu : {10.0, 40.0, 160.0, 640.0})
    for (int r = 0; r < 3; ++r)
      samples.push_back({nu, oracle::random_cloud(rng, 2, std::size_t(nu)), oracle::random_cloud(rng, 2, std::size_t(nu))});

  // exactly at the rate: flat ratio
  const Functional at_rate = [](const PointCloud& x, const PointCloud&, double p) {
    return std::pow(double(x.size()), 1.0 - p / 2.0);
  };
  const auto ok = size_bound_check(samples, q, at_rate, 1.0);
  CHECK(ok.bounded);
  CHECK(std::abs(ok.slope) < 1e-9);
  REQUIRE(ok.rows.size() == 4);
  CHECK(ok.rows[0].nu == 10.0);
  CHECK(ok.rows[0].count == 3);

  // linear growth overshoots by nu^{1/2}
  const Functional linear = [](const PointCloud& x, const PointCloud&, double) { return double(x.size()); };
  const auto bad = size_bound_check(samples, q, linear, 1.0);
  CHECK_FALSE(bad.bounded);
  CHECK(bad.slope == doctest::Approx(0.5));
}
