#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "bipfunc/graph_opt.hpp"
#include "bipfunc/matching.hpp"
#include "oracles.hpp"

using namespace bipfunc;

namespace {

// Independent membership test on an explicit edge mask of K_{n,n}.
struct Deg {
  std::vector<int> x, y;
};

Deg degrees(int n, const std::vector<std::pair<int, int>>& e) {
  Deg d{std::vector<int>(n), std::vector<int>(n)};
  for (auto [i, j] : e) {
    ++d.x[i];
    ++d.y[j];
  }
  return d;
}

bool connected(int n, const std::vector<std::pair<int, int>>& e) {
  std::vector<int> parent(2 * n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (auto [i, j] : e) parent[find(i)] = find(n + j);
  for (int v = 1; v < 2 * n; ++v)
    if (find(v) != find(0)) return false;
  return true;
}

std::size_t count_by_filter(int n, const std::function<bool(const std::vector<std::pair<int, int>>&)>& accept) {
  std::size_t count = 0;
  for (std::uint32_t mask = 0; mask < (1u << (n * n)); ++mask) {
    std::vector<std::pair<int, int>> e;
    for (int b = 0; b < n * n; ++b)
      if (mask >> b & 1u) e.emplace_back(b / n, b % n);
    if (accept(e)) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("family constants and tags") {
  CHECK(GraphFamily::Matching().kappa0 == 1);
  CHECK(GraphFamily::TspTour().kappa0 == 2);
  CHECK(GraphFamily::TspTour().kappa == 4);
  CHECK(GraphFamily::RRegular(3).kappa0 == 3);
  CHECK(GraphFamily::Matching().degree_bound() == 1);
  CHECK(GraphFamily::TspTour().degree_bound() == 2);
  for (const auto& f : {GraphFamily::Matching(), GraphFamily::TspTour(), GraphFamily::SpanningTree(3),
                        GraphFamily::RRegular(2)}) {
    CHECK(GraphFamily::FromTag(f.tag()) == f);
  }
  CHECK_THROWS(GraphFamily::FromTag("cycle"));
  CHECK_THROWS(GraphFamily::FromTag("tree:x"));
  CHECK_THROWS(GraphFamily::SpanningTree(1));
  CHECK_THROWS(GraphFamily::RRegular(0));
}

TEST_CASE("enumeration sizes") {
  CHECK(enumerate_family(2, GraphFamily::Matching()).size() == 2);
  CHECK(enumerate_family(4, GraphFamily::Matching()).size() == 24);
  CHECK(enumerate_family(1, GraphFamily::TspTour()).empty());
  CHECK(enumerate_family(2, GraphFamily::TspTour()).size() == 1);
  CHECK(enumerate_family(3, GraphFamily::TspTour()).size() == 6);
  CHECK(enumerate_family(4, GraphFamily::TspTour()).size() == 72);
  CHECK(enumerate_family(5, GraphFamily::TspTour()).size() == 1440);
  // spanning trees of K_{n,n}: n^{2(n-1)}
  CHECK(enumerate_family(3, GraphFamily::SpanningTree(3)).size() == 81);
  CHECK(enumerate_family(2, GraphFamily::SpanningTree(2)).size() == 4);
  CHECK(enumerate_family(2, GraphFamily::RRegular(2)).size() == 1);
  CHECK(enumerate_family(2, GraphFamily::RRegular(3)).empty());
}

TEST_CASE("enumeration equals the edge-subset filter on K_{3,3}") {
  const int n = 3;
  auto tree = [&](int maxdeg) {
    return [=](const std::vector<std::pair<int, int>>& e) {
      if (static_cast<int>(e.size()) != 2 * n - 1 || !connected(n, e)) return false;
      const auto d = degrees(n, e);
      for (int i = 0; i < n; ++i)
        if (d.x[i] > maxdeg || d.y[i] > maxdeg) return false;
      return true;
    };
  };
  auto regular = [&](int r) {
    return [=](const std::vector<std::pair<int, int>>& e) {
      if (!connected(n, e)) return false;
      const auto d = degrees(n, e);
      for (int i = 0; i < n; ++i)
        if (d.x[i] != r || d.y[i] != r) return false;
      return true;
    };
  };
  CHECK(enumerate_family(n, GraphFamily::SpanningTree(2)).size() == count_by_filter(n, tree(2)));
  CHECK(enumerate_family(n, GraphFamily::SpanningTree(3)).size() == count_by_filter(n, tree(3)));
  CHECK(enumerate_family(n, GraphFamily::TspTour()).size() == count_by_filter(n, regular(2)));
  CHECK(enumerate_family(n, GraphFamily::RRegular(3)).size() == count_by_filter(n, regular(3)));
  CHECK(enumerate_family(n, GraphFamily::Matching()).size() ==
        count_by_filter(n, [&](const std::vector<std::pair<int, int>>& e) {
          const auto d = degrees(n, e);
          for (int i = 0; i < n; ++i)
            if (d.x[i] != 1 || d.y[i] != 1) return false;
          return true;
        }));
  // every enumerated graph is distinct and passes membership
  for (const auto& f : {GraphFamily::TspTour(), GraphFamily::SpanningTree(2), GraphFamily::RRegular(2)}) {
    const auto all = enumerate_family(4, f);
    std::set<std::vector<std::pair<int, int>>> seen;
    for (const auto& g : all) {
      CHECK(is_member(g, f));
      CHECK(seen.insert(g.edges).second);
    }
  }
}

TEST_CASE("generic cost for matchings is the matching functional") {
  StreamRng rng(31, 0);
  for (int t = 0; t < 50; ++t) {
    const auto x = oracle::random_cloud(rng, 2, rng() % 9), y = oracle::random_cloud(rng, 2, rng() % 9);
    CHECK(generic_cost(x, y, GraphFamily::Matching(), CostParams(1)).cost == m_p_cost(x, y, CostParams(1)).cost);
  }
}

TEST_CASE("tour dynamic program against exhaustive tours") {
  StreamRng rng(32, 0);
  for (int t = 0; t < 120; ++t) {
    const int d = 1 + t % 3;
    const double p = std::vector<double>{0.5, 1.0, 2.0}[(t / 3) % 3];
    const std::size_t m = rng() % 6, n = rng() % 7;
    const auto x = oracle::random_cloud(rng, d, m), y = oracle::random_cloud(rng, d, n);
    const auto r = generic_cost(x, y, GraphFamily::TspTour(), CostParams(p));
    CHECK(oracle::close_rel(r.cost, oracle::tsp(x, y, p)));
    if (std::min(m, n) >= 2) {
      const auto g = certificate_graph(r);
      CHECK(g.n == static_cast<int>(std::min(m, n)));
      CHECK(is_member(g, GraphFamily::TspTour()));
      CHECK(oracle::close_rel(edge_cost_sum(x, y, r, p), r.cost));
    }
    if (m == n && m >= 2) CHECK(oracle::close_rel(tsp_exact_dp(x, y, CostParams(p)).cost, r.cost));
  }
}

TEST_CASE("a tour costs at least twice the matching") {
  StreamRng rng(33, 0);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + t % 7;
    const auto x = oracle::random_cloud(rng, 2, n), y = oracle::random_cloud(rng, 2, n);
    for (double p : {0.5, 1.0, 2.0}) {
      CHECK(tsp_exact_dp(x, y, CostParams(p)).cost >= 2 * m_p_cost(x, y, CostParams(p)).cost - 1e-12);
    }
  }
}

TEST_CASE("tour heuristic is feasible and never below the optimum") {
  StreamRng rng(34, 0);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + t % 9;
    const auto x = oracle::random_cloud(rng, 2, n), y = oracle::random_cloud(rng, 2, n);
    const auto h = tsp_heuristic(x, y, CostParams(1));
    CHECK_FALSE(h.exact);
    CHECK(is_member(certificate_graph(h), GraphFamily::TspTour()));
    CHECK(h.cost >= tsp_exact_dp(x, y, CostParams(1)).cost - 1e-12);
    CHECK(oracle::close_rel(edge_cost_sum(x, y, h, 1), h.cost));
  }
  const auto x = oracle::random_cloud(rng, 2, 500), y = oracle::random_cloud(rng, 2, 500);
  const auto h = tsp_heuristic(x, y, CostParams(1));
  CHECK(is_member(certificate_graph(h), GraphFamily::TspTour()));
  CHECK(h.cost >= 2 * m_p_cost(x, y, CostParams(1)).cost - 1e-9);
  CHECK_THROWS_AS(tsp_heuristic(x, oracle::random_cloud(rng, 2, 3), CostParams(1)), std::invalid_argument);
}

TEST_CASE("enumerated families against brute force for small clouds") {
  StreamRng rng(35, 0);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + t % 3;
    const auto x = oracle::random_cloud(rng, 2, n), y = oracle::random_cloud(rng, 2, n + t % 2);
    for (const auto& f : {GraphFamily::SpanningTree(2), GraphFamily::SpanningTree(3), GraphFamily::RRegular(2)}) {
      // minimum over members and over the choice of the larger side's subset
      const auto& small = x.size() <= y.size() ? x : y;
      const auto& large = x.size() <= y.size() ? y : x;
      double best = std::numeric_limits<double>::infinity();
      const auto members = enumerate_family(static_cast<int>(n), f);
      std::vector<std::size_t> perm(large.size());
      std::iota(perm.begin(), perm.end(), 0);
      do {
        for (const auto& g : members) {
          double s = 0;
          for (auto [i, j] : g.edges) s += oracle::dist_p(small[i], large[perm[j]], 1.0);
          best = std::min(best, s);
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      const auto r = generic_cost(x, y, f, CostParams(1));
      if (members.empty()) {
        CHECK(r.cost == 0.0);
      } else {
        CHECK(oracle::close_rel(r.cost, best));
        CHECK(is_member(certificate_graph(r), f));
      }
    }
  }
}

TEST_CASE("axioms hold for the built-in families") {
  const auto m = check_axioms(GraphFamily::Matching(), 5);
  CHECK(m.ok());
  CHECK(m.observed_kappa0 == 1);
  CHECK(m.max_degree == 1);

  const auto t = check_axioms(GraphFamily::TspTour(), 5);
  CHECK(t.ok());
  CHECK(t.observed_kappa0 == 2);
  CHECK(t.merge_changes <= 2 * GraphFamily::TspTour().kappa);

  const auto tr = check_axioms(GraphFamily::SpanningTree(3), 4);
  CHECK(tr.ok());
  CHECK(tr.observed_kappa0 == 1);

  const auto rr = check_axioms(GraphFamily::RRegular(2), 5);
  CHECK(rr.observed_kappa0 == 2);
  CHECK(rr.ok());
  CHECK_THROWS(check_axioms(GraphFamily::Matching(), 6));
}
