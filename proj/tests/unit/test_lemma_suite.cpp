#include <doctest.h>

#include "bipfunc/lemma_suite.hpp"
#include "bipfunc/matching.hpp"

using namespace bipfunc;

namespace {

CorpusOptions small(std::size_t count, std::uint64_t seed = 3) {
  CorpusOptions o;
  o.seed = seed;
  o.count = count;
  return o;
}

std::size_t counterexample_points(const nlohmann::json& inst) {
  std::size_t total = 0;
  if (inst.contains("clouds"))
    for (const auto& [k, v] : inst["clouds"].items()) total += v["points"].size();
  for (const char* key : {"xs", "ys"})
    if (inst.contains(key))
      for (const auto& v : inst[key]) total += v["points"].size();
  return total;
}

}  // namespace

TEST_CASE("corpora are deterministic and respect their options") {
  const auto a = group_corpus(small(50)), b = group_corpus(small(50));
  REQUIRE(a.size() == 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].xs == b[i].xs);
    CHECK(a[i].ys == b[i].ys);
    CHECK(a[i].xs.size() >= 2);
    CHECK(a[i].xs.size() <= 4);
    for (const auto& c : a[i].xs) {
      CHECK(c.size() <= 6);
      for (std::size_t k = 0; k < c.size(); ++k) CHECK(a[i].q.contains(c[k]));
    }
  }
  const auto c = group_corpus(small(50, 4));
  bool differs = false;
  for (std::size_t i = 0; i < 50; ++i) differs |= !(c[i].xs == a[i].xs);
  CHECK(differs);
  CHECK(regularity_corpus(small(20)).size() == 20);
  CHECK(superadditivity_corpus(small(20)).size() == 20);
}

TEST_CASE("matching inequalities hold on the corpus") {
  const auto opt = small(300);
  const auto sub = check_subadditivity_matching(group_corpus(opt));
  CHECK(sub.passed());
  CHECK(sub.instances == 300);
  CHECK(sub.worst_margin <= 1e-9);
  CHECK(sub.counterexample.is_null());
  CHECK(check_regularity_matching(regularity_corpus(opt)).passed());

  auto inv = opt;
  inv.exponents = {0.5, 1.0};
  CHECK(check_inverse_subadd_matching(inverse_corpus(inv)).passed());
  CHECK(check_homogeneity(family_functional(GraphFamily::Matching()), homogeneity_corpus(opt)).passed());
  CHECK(check_boundary_superadditivity(superadditivity_corpus(opt)).passed());
}

TEST_CASE("tour inequalities hold on the corpus") {
  auto opt = small(150);
  opt.max_group = 3;
  opt.max_groups = 3;
  CHECK(check_subadditivity_generic(GraphFamily::TspTour(), group_corpus(opt)).passed());
  opt.exponents = {0.5, 1.0};
  CHECK(check_inverse_subadd_tsp(inverse_corpus(opt)).passed());
}

TEST_CASE("inverse checks refuse p > 1") {
  auto opt = small(10);
  opt.exponents = {2.0};
  CHECK_THROWS_AS(check_inverse_subadd_matching(inverse_corpus(opt)), std::invalid_argument);
  CHECK_THROWS_AS(check_inverse_subadd_tsp(inverse_corpus(opt)), std::invalid_argument);
}

TEST_CASE("a perturbed solver is caught and the counterexample is shrunk") {
  const Functional exact = family_functional(GraphFamily::Matching());
  const Functional perturbed = [exact](const PointCloud& x, const PointCloud& y, double p) {
    return exact(x, y, p) + 1e-3 * static_cast<double>(x.size() + y.size());
  };
  const auto corpus = homogeneity_corpus(small(100));
  const auto rep = check_homogeneity(perturbed, corpus);
  CHECK_FALSE(rep.passed());
  REQUIRE(rep.counterexample.is_object());
  CHECK(rep.counterexample["schema_version"] == 1);
  CHECK(rep.counterexample["check"] == "homogeneity");
  // a single point already breaks scaling
  CHECK(counterexample_points(rep.counterexample["instance"]) == 1);

  const auto unshrunk = check_homogeneity(perturbed, corpus, {1, false});
  CHECK(counterexample_points(unshrunk.counterexample["instance"]) >=
        counterexample_points(rep.counterexample["instance"]));

  // a functional that punishes unions breaks subadditivity
  const Functional quadratic = [](const PointCloud& x, const PointCloud& y, double) {
    const double n = static_cast<double>(x.size() + y.size());
    return n * n;
  };
  const auto sub = check_subadditivity_matching(group_corpus(small(50)), quadratic);
  CHECK_FALSE(sub.passed());
  CHECK(sub.worst_margin > 0.0);
  CHECK(sub.counterexample["lhs"].get<double>() > sub.counterexample["rhs"].get<double>());
}

TEST_CASE("reports do not depend on the thread count") {
  const auto corpus = group_corpus(small(120));
  const auto one = check_subadditivity_matching(corpus, family_functional(GraphFamily::Matching()), {1, true});
  const auto four = check_subadditivity_matching(corpus, family_functional(GraphFamily::Matching()), {4, true});
  CHECK(one.worst_margin == four.worst_margin);
  CHECK(one.violations == four.violations);
}
