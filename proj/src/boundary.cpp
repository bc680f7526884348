#include "bipfunc/boundary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bipfunc/errors.hpp"

namespace bipfunc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kInteriorLimit = 5;

void require_inside(const PointCloud& c, const BoxRegion& s) {
  if (!c.empty() && c.dim() != s.dim()) throw std::invalid_argument("point dimension differs from region");
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!s.contains(c[i])) throw std::invalid_argument("point outside the region");
  }
}

std::vector<double> penalties(const PointCloud& c, const BoxRegion& s, const CostParams& params) {
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = boundary_penalty(c[i], s, params);
  return out;
}

SolveResult generic_matching(const PointCloud& x, const PointCloud& y, const std::vector<double>& px,
                             const std::vector<double>& py, const CostParams& params, int n_lo, int n_hi) {
  const int m = static_cast<int>(x.size()), n = static_cast<int>(y.size());
  const CostMatrix real = power_cost_matrix(x, y, params.p());
  SolveResult best;
  best.cost = kInf;
  for (int N = n_lo; N <= n_hi; ++N) {
    CostMatrix c(N, N, 0.0);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        if (i < m && j < n) c(i, j) = real(i, j);
        else if (i < m) c(i, j) = px[i];
        else if (j < n) c(i, j) = py[j];
      }
    }
    const Assignment a = assignment_min_cost(c);
    if (a.cost < best.cost) {
      best = SolveResult{};
      best.cost = a.cost;
      best.augmented_x = N - m;
      best.augmented_y = N - n;
      for (int i = 0; i < N; ++i) {
        const int j = static_cast<int>(a.col_of_row[i]);
        if (i < m && j < n) best.matched.emplace_back(i, j);
        else if (i < m) best.boundary_x.push_back(i);
        else if (j < n) best.boundary_y.push_back(j);
      }
    }
  }
  return best;
}

// Alternating tour through the interior points and at most `cap` exterior
// points per side. Exterior points only matter through the runs they form
// between consecutive interior vertices, so the tour is a cyclic sequence of
// interior vertices joined either directly (opposite species, |x - y|^p) or
// through an exterior run (penalty of both ends). A run between two X points
// needs one more exterior Y than X, a run between two Y points the converse,
// a mixed run one of each; further exterior pairs ride along for free.
SolveResult generic_tsp(const PointCloud& x, const PointCloud& y, const std::vector<double>& px,
                        const std::vector<double>& py, const CostParams& params, int cap) {
  const int m = static_cast<int>(x.size()), n = static_cast<int>(y.size());
  const int k = m + n;
  SolveResult r;
  if (k == 0) {
    if (cap < 2) throw std::invalid_argument("augmentation cap too small for an all-exterior tour");
    r.augmented_x = r.augmented_y = 2;
    return r;
  }
  // Vertex v < m is X_v, otherwise Y_{v-m}.
  auto is_x = [&](int v) { return v < m; };
  auto pen = [&](int v) { return is_x(v) ? px[v] : py[v - m]; };
  const CostMatrix real = power_cost_matrix(x, y, params.p());
  auto direct = [&](int u, int v) { return is_x(u) ? real(u, v - m) : real(v, u - m); };
  // exterior X / Y points a run between u and v needs
  auto run_use = [&](int u, int v) -> std::pair<int, int> {
    if (is_x(u) && is_x(v)) return {0, 1};
    if (!is_x(u) && !is_x(v)) return {1, 0};
    return {1, 1};
  };

  if (k == 1) {
    // u, e, e', e'', u: one exterior vertex of u's species and two of the other
    const int ax = is_x(0) ? 1 : 2, by = is_x(0) ? 2 : 1;
    if (std::max(ax, by) > cap) throw std::invalid_argument("augmentation cap too small");
    r.cost = 2.0 * pen(0);
    (is_x(0) ? r.boundary_x : r.boundary_y) = {0, 0};
    r.augmented_x = ax;
    r.augmented_y = by;
    return r;
  }

  const int lim = std::min(cap, k);  // runs <= k, so counts beyond k never occur
  const int A = lim + 1;
  const std::size_t states = (std::size_t{1} << k) * k * A * A;
  std::vector<double> dp(states, kInf);
  struct Parent {
    std::int32_t prev = -1;
    bool via = false;
  };
  std::vector<Parent> parent(states);
  auto idx = [&](std::uint32_t mask, int last, int a, int b) {
    return ((static_cast<std::size_t>(mask) * k + last) * A + a) * A + b;
  };
  dp[idx(1u, 0, 0, 0)] = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << k); mask += 2) {
    for (int last = 0; last < k; ++last) {
      if (!(mask >> last & 1u)) continue;
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < A; ++b) {
          const std::size_t from = idx(mask, last, a, b);
          const double base = dp[from];
          if (base == kInf) continue;
          for (int v = 1; v < k; ++v) {
            if (mask >> v & 1u) continue;
            const std::uint32_t next = mask | 1u << v;
            if (is_x(last) != is_x(v)) {
              const std::size_t to = idx(next, v, a, b);
              const double val = base + direct(last, v);
              if (val < dp[to]) {
                dp[to] = val;
                parent[to] = {static_cast<std::int32_t>(from), false};
              }
            }
            const auto [da, db] = run_use(last, v);
            if (a + da < A && b + db < A) {
              const std::size_t to = idx(next, v, a + da, b + db);
              const double val = base + pen(last) + pen(v);
              if (val < dp[to]) {
                dp[to] = val;
                parent[to] = {static_cast<std::int32_t>(from), true};
              }
            }
          }
        }
      }
    }
  }

  const std::uint32_t full = (1u << k) - 1;
  double best = kInf;
  std::size_t best_state = 0;
  bool best_close_via = false;
  int best_a = 0, best_b = 0;
  for (int last = 1; last < k; ++last) {
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < A; ++b) {
        const std::size_t s = idx(full, last, a, b);
        if (dp[s] == kInf) continue;
        // with two interior vertices a second direct edge would repeat the first
        const bool first_direct = k == 2 && !parent[s].via;
        if (is_x(last) != is_x(0) && !first_direct) {
          const double val = dp[s] + direct(last, 0);
          if (val < best) {
            best = val;
            best_state = s;
            best_close_via = false;
            best_a = a;
            best_b = b;
          }
        }
        const auto [da, db] = run_use(last, 0);
        if (a + da <= cap && b + db <= cap) {
          const double val = dp[s] + pen(last) + pen(0);
          if (val < best) {
            best = val;
            best_state = s;
            best_close_via = true;
            best_a = a + da;
            best_b = b + db;
          }
        }
      }
    }
  }
  if (best == kInf) throw std::invalid_argument("augmentation cap too small for any admissible tour");

  r.cost = best;
  r.augmented_x = best_a;
  r.augmented_y = best_b;
  auto add_edge = [&](int u, int v, bool via) {
    if (!via) {
      if (is_x(u)) r.matched.emplace_back(u, v - m);
      else r.matched.emplace_back(v, u - m);
      return;
    }
    for (int w : {u, v}) {
      if (is_x(w)) r.boundary_x.push_back(w);
      else r.boundary_y.push_back(w - m);
    }
  };
  const auto decode_last = [&](std::size_t s) { return static_cast<int>((s / (A * A)) % k); };
  add_edge(decode_last(best_state), 0, best_close_via);
  std::size_t s = best_state;
  while (parent[s].prev >= 0) {
    const std::size_t p = static_cast<std::size_t>(parent[s].prev);
    add_edge(decode_last(p), decode_last(s), parent[s].via);
    s = p;
  }
  std::sort(r.matched.begin(), r.matched.end());
  std::sort(r.boundary_x.begin(), r.boundary_x.end());
  std::sort(r.boundary_y.begin(), r.boundary_y.end());
  return r;
}

// Enumeration over members of G_N with X, Y on the first rows/columns and
// exterior points on the rest.
SolveResult generic_enumeration(const PointCloud& x, const PointCloud& y, const std::vector<double>& px,
                                const std::vector<double>& py, const GraphFamily& family,
                                const CostParams& params, int n_lo, int n_hi) {
  const int m = static_cast<int>(x.size()), n = static_cast<int>(y.size());
  const CostMatrix real = power_cost_matrix(x, y, params.p());
  SolveResult best;
  best.cost = kInf;
  for (int N = n_lo; N <= n_hi; ++N) {
    for (const auto& g : enumerate_family(N, family)) {
      double total = 0.0;
      for (auto [i, j] : g.edges) {
        if (i < m && j < n) total += real(i, j);
        else if (i < m) total += px[i];
        else if (j < n) total += py[j];
      }
      if (total < best.cost) {
        best = SolveResult{};
        best.cost = total;
        best.augmented_x = N - m;
        best.augmented_y = N - n;
        for (auto [i, j] : g.edges) {
          if (i < m && j < n) best.matched.emplace_back(i, j);
          else if (i < m) best.boundary_x.push_back(i);
          else if (j < n) best.boundary_y.push_back(j);
        }
      }
    }
  }
  std::sort(best.boundary_x.begin(), best.boundary_x.end());
  std::sort(best.boundary_y.begin(), best.boundary_y.end());
  return best;
}

}  // namespace

double boundary_penalty(PointView x, const BoxRegion& s, const CostParams& params) {
  const double d = boundary_dist(x, s);
  return params.q() * (std::pow(d, params.p()) + std::pow(params.eps(), params.p()));
}

SolveResult boundary_matching_cost(const PointCloud& x, const PointCloud& y, const CostParams& params,
                                   const BoxRegion& s) {
  require_same_dim(x, y);
  require_inside(x, s);
  require_inside(y, s);
  const auto px = penalties(x, s, params);
  const auto py = penalties(y, s, params);
  SolveResult r;
  std::vector<char> y_matched(y.size(), 0);
  if (!x.empty()) {
    CostMatrix c(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < y.size(); ++j) c(i, j) = pow_dist(x[i], y[j], params.p()) - py[j];
    }
    const auto col_of_row = detail::shortest_augmenting_path(c, px);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (col_of_row[i] == y.size()) {
        r.boundary_x.push_back(i);
      } else {
        r.matched.emplace_back(i, col_of_row[i]);
        y_matched[col_of_row[i]] = 1;
      }
    }
  }
  for (std::size_t j = 0; j < y.size(); ++j) if (!y_matched[j]) r.boundary_y.push_back(j);
  std::sort(r.matched.begin(), r.matched.end());
  // Cost recomputed from the certificate rather than from the shifted matrix.
  for (auto [i, j] : r.matched) r.cost += pow_dist(x[i], y[j], params.p());
  for (std::size_t i : r.boundary_x) r.cost += px[i];
  for (std::size_t j : r.boundary_y) r.cost += py[j];
  return r;
}

CostMatrix boundary_matching_reduction(const PointCloud& x, const PointCloud& y, const CostParams& params,
                                       const BoxRegion& s) {
  require_same_dim(x, y);
  require_inside(x, s);
  require_inside(y, s);
  const std::size_t m = x.size(), n = y.size();
  CostMatrix c(m + n, m + n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double pi = boundary_penalty(x[i], s, params);
    for (std::size_t j = 0; j < n; ++j) c(i, j) = pow_dist(x[i], y[j], params.p());
    for (std::size_t j = n; j < m + n; ++j) c(i, j) = pi;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double pj = boundary_penalty(y[j], s, params);
    for (std::size_t i = m; i < m + n; ++i) c(i, j) = pj;
  }
  return c;
}

int default_aug_cap(std::size_t m, std::size_t n, const GraphFamily& family) {
  return static_cast<int>(2 * (m + n)) + family.kappa0;
}

SolveResult boundary_generic_cost(const PointCloud& x, const PointCloud& y, const GraphFamily& family,
                                  const CostParams& params, const BoxRegion& s, int aug_cap) {
  require_same_dim(x, y);
  require_inside(x, s);
  require_inside(y, s);
  const int m = static_cast<int>(x.size()), n = static_cast<int>(y.size());
  const int cap = aug_cap < 0 ? default_aug_cap(m, n, family) : aug_cap;
  if (cap < family.kappa0) throw std::invalid_argument("augmentation cap must be at least kappa0");
  const int n_lo = std::max({m, n, family.kappa0});
  const int n_hi = std::min(m, n) + cap;
  if (n_lo > n_hi) throw std::invalid_argument("augmentation cap too small to balance the two sides");
  const auto px = penalties(x, s, params);
  const auto py = penalties(y, s, params);

  SolveResult r;
  bool exact = cap >= m + n + family.kappa0;
  switch (family.kind) {
    case FamilyKind::Matching:
      r = generic_matching(x, y, px, py, params, n_lo, n_hi);
      break;
    case FamilyKind::TspTour:
      if (m > kInteriorLimit || n > kInteriorLimit) {
        throw SizeLimitError("boundary tour functional is limited to 5 interior points per side");
      }
      r = generic_tsp(x, y, px, py, params, cap);
      break;
    case FamilyKind::SpanningTreeMaxDeg:
    case FamilyKind::RRegularConnected: {
      if (m > kInteriorLimit || n > kInteriorLimit || n_lo > kInteriorLimit) {
        throw SizeLimitError("boundary enumeration is limited to 5 points per side");
      }
      const int top = std::min(n_hi, kInteriorLimit);
      if (top < std::min(m, n) + m + n + family.kappa0) exact = false;
      r = generic_enumeration(x, y, px, py, family, params, n_lo, top);
      break;
    }
  }
  r.exact = exact;
  fill_unmatched(r, x.size(), y.size());
  return r;
}

}  // namespace bipfunc
