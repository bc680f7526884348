#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "bipfunc/estimators.hpp"
#include "bipfunc/geometry.hpp"
#include "bipfunc/graph_opt.hpp"

namespace bipfunc {

// L_dS(X, Y) with edge exponent p (eps = 0).
using BoundaryFunctional =
    std::function<double(const PointCloud& x, const PointCloud& y, double p, const BoxRegion& s)>;

BoundaryFunctional boundary_matching_functional();

// k groups (X_i, Y_i) in a common box.
struct GroupInstance {
  BoxRegion q;
  double p;
  std::vector<PointCloud> xs;
  std::vector<PointCloud> ys;
};

// Six multisets X, X1, X2, Y, Y1, Y2 in a common box.
struct RegularityInstance {
  BoxRegion q;
  double p;
  PointCloud x, x1, x2, y, y1, y2;
};

struct InverseInstance {
  BoxRegion q;
  double p;
  PointCloud x1, y1, x2, y2;
};

// L(a + lambda X, a + lambda Y) against lambda^p L(X, Y).
struct HomogeneityInstance {
  double p;
  double lambda;
  Point shift;
  PointCloud x, y;
};

struct SuperadditivityInstance {
  BoxRegion q;
  double p;
  int level;
  PointCloud x, y;
};

struct LemmaReport {
  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  // Largest lhs - rhs seen; negative when every instance holds strictly.
  double worst_margin = -std::numeric_limits<double>::infinity();
  // First violating instance after shrinking, or null.
  nlohmann::json counterexample;

  bool passed() const { return violations == 0; }
};

struct CheckOptions {
  int threads = 1;
  bool shrink = true;
};

// ---- seeded corpora, biased toward clustered, near-boundary, coincident and
// unbalanced configurations.

struct CorpusOptions {
  std::uint64_t seed = 1;
  std::size_t count = 500;
  int max_group = 6;   // points per multiset
  int min_groups = 2;
  int max_groups = 4;
  std::vector<double> exponents = {0.5, 1.0, 2.0};
  std::vector<int> dims = {1, 2, 3};
};

std::vector<GroupInstance> group_corpus(const CorpusOptions& opt);
std::vector<RegularityInstance> regularity_corpus(const CorpusOptions& opt);
std::vector<InverseInstance> inverse_corpus(const CorpusOptions& opt);
std::vector<HomogeneityInstance> homogeneity_corpus(const CorpusOptions& opt);
std::vector<SuperadditivityInstance> superadditivity_corpus(const CorpusOptions& opt);

// ---- checks; every inequality is asserted with 1e-9 absolute slack,
// homogeneity with 1e-9 relative tolerance.

// M(U X_i, U Y_i) <= sum M(X_i, Y_i) + diam(Q)^p / 2 sum |X_i - Y_i|
LemmaReport check_subadditivity_matching(const std::vector<GroupInstance>& instances,
                                         const Functional& functional = family_functional(GraphFamily::Matching()),
                                         const CheckOptions& opt = {});

// M(X u X1, Y u Y1) <= M(X u X2, Y u Y2) + diam(Q)^p (|X1| + |X2| + |Y1| + |Y2|)
LemmaReport check_regularity_matching(const std::vector<RegularityInstance>& instances,
                                      const Functional& functional = family_functional(GraphFamily::Matching()),
                                      const CheckOptions& opt = {});

// L(U X_i, U Y_i) <= sum L(X_i, Y_i) + C diam(Q)^p sum (1 + |X_i - Y_i|),
// C = (3 + kappa0) kappa / 2. An empty functional selects the family's.
LemmaReport check_subadditivity_generic(const GraphFamily& family, const std::vector<GroupInstance>& instances,
                                        const Functional& functional = {}, const CheckOptions& opt = {});

// M(X1, Y1) <= M(X1 u X2, Y1 u Y2) + M(X2, Y2) + diam^p (|X1 - Y1| + 2 |X2 - Y2|);
// only for p <= 1 (std::invalid_argument otherwise).
LemmaReport check_inverse_subadd_matching(const std::vector<InverseInstance>& instances,
                                          const Functional& functional = family_functional(GraphFamily::Matching()),
                                          const CheckOptions& opt = {});

// T(X1, Y1) <= T(X1 u X2, Y1 u Y2) + T(X2, Y2) + 2 diam^p (1 + |X1 - Y1| + |X2 - Y2|), p <= 1.
LemmaReport check_inverse_subadd_tsp(const std::vector<InverseInstance>& instances,
                                     const Functional& functional = family_functional(GraphFamily::TspTour()),
                                     const CheckOptions& opt = {});

LemmaReport check_homogeneity(const Functional& functional, const std::vector<HomogeneityInstance>& instances,
                              const CheckOptions& opt = {}, const std::string& name = "homogeneity");

// L_dQ(X, Y) >= sum_P L_dP(X n P, Y n P) over the dyadic partition at `level`.
LemmaReport check_boundary_superadditivity(const std::vector<SuperadditivityInstance>& instances,
                                           const BoundaryFunctional& functional = boundary_matching_functional(),
                                           const CheckOptions& opt = {});

}  // namespace bipfunc
