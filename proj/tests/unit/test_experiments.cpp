#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bipfunc/errors.hpp"
#include "bipfunc/experiments.hpp"
#include "oracles.hpp"

using namespace bipfunc;

namespace {

ExperimentConfig cube_config(std::vector<double> schedule, std::vector<std::size_t> trials, std::uint64_t seed = 5) {
  ExperimentConfig c;
  c.n_schedule = std::move(schedule);
  c.trials = std::move(trials);
  c.seed = seed;
  return c;
}

EstimateRecord record(double n, double ratio, double se_ratio, double rate_exp = 2.0 / 3.0) {
  EstimateRecord r;
  r.n = n;
  r.trials = 100;
  r.ratio = ratio;
  r.mean = ratio * std::pow(n, rate_exp);
  r.stderr_ = se_ratio * std::pow(n, rate_exp);
  return r;
}

}  // namespace

TEST_CASE("single-record run is reproducible bit for bit") {
  const auto c = cube_config({1}, {1});
  const auto a = run_convergence(c), b = run_convergence(c);
  REQUIRE(a.size() == 1);
  CHECK(a[0].trials == 1);
  CHECK(a[0].mean == b[0].mean);
  CHECK(a[0].stderr_ == 0.0);
}

TEST_CASE("thread count does not change any sample") {
  auto c = cube_config({20, 60}, {13, 7});
  const auto one = run_convergence(c);
  c.threads = 4;
  const auto four = run_convergence(c);
  for (std::size_t k = 0; k < one.size(); ++k) {
    CHECK(one[k].samples == four[k].samples);
    CHECK(one[k].mean == four[k].mean);
    CHECK(one[k].stderr_ == four[k].stderr_);
  }
  CHECK(one[1].trials == 7);
}

TEST_CASE("summaries") {
  const auto r = summarize(8.0, {1.0, 2.0, 3.0, 6.0}, 2.0 / 3.0);
  CHECK(r.mean == doctest::Approx(3.0));
  // sample variance (4 + 1 + 0 + 9) / 3
  CHECK(r.stderr_ == doctest::Approx(std::sqrt(14.0 / 3.0 / 4.0)));
  CHECK(r.ratio == doctest::Approx(3.0 / 4.0));
}

TEST_CASE("beta estimate") {
  SUBCASE("constant ratios leave only the confidence interval") {
    std::vector<EstimateRecord> rs;
    for (double n : {125.0, 250.0, 500.0, 1000.0}) rs.push_back(record(n, 0.7, 0.01));
    const auto b = estimate_beta(rs);
    CHECK(b.beta == doctest::Approx(0.7));
    CHECK(b.uncertainty == doctest::Approx(1.96 * 0.01));
    CHECK(b.beta_fit == doctest::Approx(0.7));
  }
  SUBCASE("power-law correction") {
    const double beta = 0.6, c = 0.8;
    std::vector<EstimateRecord> rs;
    for (double n : {125.0, 250.0, 500.0, 1000.0, 2000.0}) rs.push_back(record(n, beta + c * std::pow(n, -1.0 / 3.0), 0.0));
    const auto b = estimate_beta(rs);
    CHECK(std::abs(b.beta - beta) <= c * std::pow(2000.0, -1.0 / 3.0) + b.uncertainty);
    CHECK(b.uncertainty == doctest::Approx(c * (std::pow(1000.0, -1.0 / 3.0) - std::pow(2000.0, -1.0 / 3.0))));
    CHECK(b.beta_fit == doctest::Approx(beta).epsilon(1e-9));
  }
  SUBCASE("the preceding entry stands in for n_max / 2") {
    std::vector<EstimateRecord> rs = {record(100, 1.0, 0), record(300, 0.9, 0), record(700, 0.85, 0)};
    CHECK(estimate_beta(rs).uncertainty == doctest::Approx(0.05));
  }
  CHECK_THROWS_AS(estimate_beta({record(1, 1, 0), record(2, 1, 0)}), std::invalid_argument);
}

TEST_CASE("density functional in closed form") {
  CHECK(density_functional(MeasureSpec{UniformBox{BoxRegion::UnitCube(3)}}, 1.0, 3) == doctest::Approx(1.0));
  const BoxRegion box({0, 0, 0}, {2, 1, 0.5});
  CHECK(density_functional(MeasureSpec{UniformBox{box}}, 1.0, 3) == doctest::Approx(std::cbrt(1.0)));
  const auto small = BoxRegion::Cube(3, 0, 0.5);
  CHECK(density_functional(MeasureSpec{UniformBox{small}}, 1.0, 3) == doctest::Approx(0.5));
  CHECK(density_functional(MeasureSpec{UniformBox{BoxRegion::Cube(5, 0, 0.5)}}, 2.0, 5) ==
        doctest::Approx(std::pow(1.0 / 32, 0.4)));

  // weights 3/4 and 1/4 on the halves x0 < 1/2 and x0 >= 1/2
  const DyadicPartition part(BoxRegion::UnitCube(3), 1);
  std::vector<double> w(part.size());
  for (std::size_t c = 0; c < part.size(); ++c) w[c] = part.cells()[c].lo()[0] < 0.5 ? 0.75 / 4 : 0.25 / 4;
  const double expect = 0.5 * std::pow(1.5, 2.0 / 3.0) + 0.5 * std::pow(0.5, 2.0 / 3.0);
  CHECK(density_functional(MeasureSpec{BlockDensity{part, w}}, 1.0, 3) == doctest::Approx(expect));

  // half uniform cube, half segment: only f = 1/2 on the cube counts
  const MeasureSpec seg{SingularSegment{{0, 0, 0}, {1, 1, 1}}};
  const MeasureSpec mix{Mixture{{0.5, 0.5}, {MeasureSpec{UniformBox{BoxRegion::UnitCube(3)}}, seg}}};
  CHECK(density_functional(mix, 1.0, 3) == doctest::Approx(std::pow(0.5, 2.0 / 3.0)));
  CHECK(density_functional(seg, 1.0, 3) == 0.0);
  CHECK(density_functional(MeasureSpec{CantorMeasure{}}, 0.25, 1) == 0.0);

  // overlapping boxes on the line: f = 1/2, 1, 1/2 on three unit halves
  const MeasureSpec overlap{Mixture{{0.5, 0.5},
                                    {MeasureSpec{UniformBox{BoxRegion({0.0}, {1.0})}},
                                     MeasureSpec{UniformBox{BoxRegion({0.5}, {1.5})}}}}};
  CHECK(density_functional(overlap, 0.5, 1) == doctest::Approx(2 * 0.5 * std::sqrt(0.5) + 0.5));

  CHECK_THROWS_AS(density_functional(MeasureSpec{HeavyTailRadial{3.0, 3}}, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(density_functional(seg, 1.0, 2), std::invalid_argument);
}

TEST_CASE("config validation") {
  CHECK(check_config(cube_config({10, 20}, {3})).empty());
  auto bad = cube_config({20, 10}, {3});
  try {
    check_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.keys() == std::vector<std::string>{"n_schedule"});
  }
  CHECK_THROWS_AS(check_config(cube_config({10, 20}, {3, 4, 5})), ConfigError);
  CHECK_THROWS_AS(check_config(cube_config({10}, {0})), ConfigError);
  auto tsp = cube_config({10}, {2});
  tsp.functional = FunctionalKind::TspHeuristic;
  CHECK_THROWS_AS(check_config(tsp), ConfigError);
  tsp.poissonized = false;
  CHECK(check_config(tsp).empty());
  auto heavy = cube_config({10}, {2});
  heavy.measure = MeasureSpec{HeavyTailRadial{4.0, 3}};
  heavy.boundary = true;
  CHECK_THROWS_AS(check_config(heavy), ConfigError);
  auto low = cube_config({10}, {2});
  low.dim = 2;
  low.measure = MeasureSpec{UniformBox{BoxRegion::UnitCube(2)}};
  CHECK(check_config(low).size() == 1);  // d = 2p is out of theory
  CHECK_FALSE(in_theory(low));
  low.dim = 3;
  CHECK_THROWS_AS(check_config(low), ConfigError);  // measure dimension differs
}

TEST_CASE("size guard") {
  auto c = cube_config({9000}, {1});
  c.poissonized = false;
  CHECK_THROWS_AS(run_convergence(c), SizeLimitError);
}

TEST_CASE("boundary and heuristic runs") {
  auto c = cube_config({30, 60, 120}, {10});
  const auto plain = run_convergence(c);
  c.boundary = true;
  const auto bnd = run_convergence(c);
  for (const auto& r : bnd) CHECK(r.ratio > 0.0);
  // the boundary functional of a balanced sample never exceeds the plain one
  c.poissonized = false;
  c.boundary = false;
  const auto fixed_plain = run_convergence(c);
  c.boundary = true;
  const auto fixed_bnd = run_convergence(c);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < 10; ++i) CHECK(fixed_bnd[k].samples[i] <= fixed_plain[k].samples[i] + 1e-9);

  c.boundary = false;
  c.functional = FunctionalKind::TspHeuristic;
  const auto tour = run_convergence(c);
  for (std::size_t k = 0; k < 3; ++k) CHECK(tour[k].mean >= 2 * fixed_plain[k].mean - 1e-9);
}

TEST_CASE("poissonization gap") {
  auto c = cube_config({1, 30, 90}, {20});
  const auto rep = run_poissonization_gap(c);
  REQUIRE(rep.rows.size() == 3);
  CHECK(std::isfinite(rep.rows[0].normalized_gap));
  for (const auto& r : rep.rows) CHECK(r.normalized_gap >= 0.0);

  // both samples sit on one point: every cost is 0
  c.measure = MeasureSpec{SingularSegment{{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}};
  const auto flat = run_poissonization_gap(c);
  for (const auto& r : flat.rows) {
    CHECK(r.mean_fixed == 0.0);
    CHECK(r.normalized_gap == 0.0);
  }
}

TEST_CASE("tail maximum") {
  TailMaxConfig t;
  t.n_schedule = {10, 100, 1000};
  t.trials = 200;
  const auto rep = run_tail_max(t);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].moment >= 1.0);  // every radius is at least 1
  CHECK(rep.slope > 0.0);

  t.measure = MeasureSpec{UniformBox{BoxRegion::UnitCube(3)}};
  const auto bounded = run_tail_max(t);
  for (const auto& r : bounded.rows) CHECK(r.moment <= std::sqrt(3.0));
  CHECK(bounded.rows[2].ratio < bounded.rows[0].ratio);
  CHECK(bounded.bounded);

  t.gamma = 8.0;
  CHECK_THROWS_AS(run_tail_max(t), std::invalid_argument);
}

TEST_CASE("concentration") {
  auto c = cube_config({1, 40}, {30});
  const auto rep = run_concentration(c);
  REQUIRE(rep.rows.size() == 2);
  CHECK(std::isfinite(rep.rows[0].std));
  CHECK(rep.within_envelope);
  CHECK(rep.rows[1].envelope == doctest::Approx(4 * std::sqrt(3.0) * std::sqrt(80 * std::log(2.0))));
  CHECK_THROWS_AS(run_concentration(cube_config({10}, {1})), ConfigError);
  auto heavy = cube_config({10}, {30});
  heavy.measure = MeasureSpec{HeavyTailRadial{4.0, 3}};
  CHECK_THROWS_AS(run_concentration(heavy), ConfigError);
}

TEST_CASE("singular decay on a segment") {
  auto c = cube_config({50, 400}, {10});
  c.measure = MeasureSpec{SingularSegment{{0, 0, 0}, {1, 1, 1}}};
  const auto rep = run_singular_decay(c);
  CHECK(rep.records[1].ratio < rep.records[0].ratio);
  CHECK(rep.warnings.empty());
}

TEST_CASE("CSV output") {
  std::ostringstream out;
  write_records_csv(out, {record(125, 0.5, 0.01)}, "matching", 1.0, 3, 9);
  const std::string s = out.str();
  CHECK(s.rfind("n,trials,mean,stderr,ratio,functional,p,d,seed,schema_version\n", 0) == 0);
  CHECK(s.find(",matching,1,3,9,1\n") != std::string::npos);
}
