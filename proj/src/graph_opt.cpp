#include "bipfunc/graph_opt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "bipfunc/errors.hpp"

namespace bipfunc {

namespace {

constexpr int kEnumerationLimit = 5;
constexpr int kTspDpLimit = 12;
constexpr double kTspStateLimit = 4e7;
constexpr double kEnumerationWorkLimit = 5e7;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Union-find over the 2n vertices; rows are 0..n-1, columns n..2n-1.
struct Components {
  explicit Components(int count) : parent(count) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<int> parent;
};

bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n == 0) return true;
  Components comp(2 * n);
  int merges = 0;
  for (auto [i, j] : edges) merges += comp.unite(i, n + j);
  return merges == 2 * n - 1;
}

// Graphs whose rows each pick an r-subset of columns with every column of
// degree r, filtered by connectivity.
std::vector<BipartiteGraph> enumerate_regular(int n, int r) {
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) == r) subsets.push_back(s);
  }
  std::vector<BipartiteGraph> out;
  std::vector<std::uint32_t> rows(n);
  std::vector<int> col_deg(n, 0);
  auto recurse = [&](auto&& self, int i) -> void {
    if (i == n) {
      BipartiteGraph g{n, {}};
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) if (rows[a] >> b & 1u) g.edges.emplace_back(a, b);
      }
      if (connected(n, g.edges)) out.push_back(std::move(g));
      return;
    }
    const int rows_left = n - i;
    for (std::uint32_t s : subsets) {
      bool fits = true;
      for (int b = 0; b < n && fits; ++b) {
        const int deg = col_deg[b] + static_cast<int>(s >> b & 1u);
        // every column must still be able to reach degree r
        if (deg > r || deg + (rows_left - 1) < r) fits = false;
      }
      if (!fits) continue;
      rows[i] = s;
      for (int b = 0; b < n; ++b) col_deg[b] += static_cast<int>(s >> b & 1u);
      self(self, i + 1);
      for (int b = 0; b < n; ++b) col_deg[b] -= static_cast<int>(s >> b & 1u);
    }
  };
  recurse(recurse, 0);
  return out;
}

std::vector<BipartiteGraph> enumerate_trees(int n, int max_deg) {
  const int m = n * n;
  const int need = 2 * n - 1;
  std::vector<BipartiteGraph> out;
  std::vector<int> deg(2 * n, 0);
  std::vector<std::pair<int, int>> chosen;
  auto recurse = [&](auto&& self, int e, const std::vector<int>& label) -> void {
    const int have = static_cast<int>(chosen.size());
    if (have == need) {
      out.push_back({n, chosen});
      return;
    }
    if (m - e < need - have) return;
    const int i = e / n, j = e % n;
    const int a = label[i], b = label[n + j];
    if (a != b && deg[i] < max_deg && deg[n + j] < max_deg) {
      std::vector<int> next = label;
      for (int& l : next) if (l == a) l = b;
      ++deg[i];
      ++deg[n + j];
      chosen.emplace_back(i, j);
      self(self, e + 1, next);
      chosen.pop_back();
      --deg[i];
      --deg[n + j];
    }
    self(self, e + 1, label);
  };
  std::vector<int> label(2 * n);
  std::iota(label.begin(), label.end(), 0);
  recurse(recurse, 0, label);
  return out;
}

std::vector<int> degrees(const BipartiteGraph& g) {
  std::vector<int> deg(2 * g.n, 0);
  for (auto [i, j] : g.edges) {
    ++deg[i];
    ++deg[g.n + j];
  }
  return deg;
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

// Cost matrix between the row and column clouds with a canonical orientation
// (rows = smaller side); `rows_x` tells which input is the row side.
struct Oriented {
  const PointCloud* rows;
  const PointCloud* cols;
  bool rows_x;
};

Oriented orient(const PointCloud& x, const PointCloud& y) {
  const bool rx = x_is_rows(x, y);
  return {rx ? &x : &y, rx ? &y : &x, rx};
}

void push_edge(SolveResult& r, const Oriented& o, std::size_t row, std::size_t col) {
  r.matched.emplace_back(o.rows_x ? IndexPair{row, col} : IndexPair{col, row});
}

void finish(SolveResult& r, const PointCloud& x, const PointCloud& y) {
  std::sort(r.matched.begin(), r.matched.end());
  fill_unmatched(r, x.size(), y.size());
}

// Exact alternating tour over all m rows and m of the L >= m columns, the tour
// anchored at row 0. Layer k holds partial tours that visited k rows
// (row 0 included) and k columns and stand on a column; the half layer holds
// tours that visited k rows, k - 1 columns and stand on a row. Masks are
// ranked in the combinatorial number system.
SolveResult tsp_rectangular_dp(const Oriented& o, const CostParams& params) {
  const int m = static_cast<int>(o.rows->size());
  const int L = static_cast<int>(o.cols->size());
  SolveResult r;
  if (m < 2) return r;
  if (m > kTspDpLimit || L > 20) {
    throw SizeLimitError("exact tour recursion supports at most 12 points on the smaller side and 20 on the larger");
  }
  double states = 0.0;
  for (int k = 1; k <= m; ++k) {
    states += binom(m - 1, k - 1) * binom(L, k) * L + binom(m - 1, k - 1) * binom(L, k - 1) * (m - 1);
  }
  if (states > kTspStateLimit) throw SizeLimitError("exact tour recursion exceeds its state budget");

  const CostMatrix c = power_cost_matrix(*o.rows, *o.cols, params.p());
  const int R = m - 1;  // rows other than the anchor
  std::vector<std::vector<std::uint32_t>> rmasks(R + 1), cmasks(L + 1);
  std::vector<std::uint32_t> rrank(1u << R), crank(1u << L);
  for (std::uint32_t s = 0; s < (1u << R); ++s) {
    auto& v = rmasks[std::popcount(s)];
    rrank[s] = static_cast<std::uint32_t>(v.size());
    v.push_back(s);
  }
  for (std::uint32_t s = 0; s < (1u << L); ++s) {
    auto& v = cmasks[std::popcount(s)];
    crank[s] = static_cast<std::uint32_t>(v.size());
    v.push_back(s);
  }
  // col_layer[k][(rank(R) * |C_k| + rank(C)) * L + j]: k columns visited
  // row_layer[k][(rank(R) * |C_{k-1}| + rank(C)) * R + (i - 1)]: k rows visited
  std::vector<std::vector<double>> col_layer(m + 1), row_layer(m + 1);
  auto col_idx = [&](int k, std::uint32_t rm, std::uint32_t cm, int j) {
    return (static_cast<std::size_t>(rrank[rm]) * cmasks[k].size() + crank[cm]) * L + j;
  };
  auto row_idx = [&](int k, std::uint32_t rm, std::uint32_t cm, int i) {
    return (static_cast<std::size_t>(rrank[rm]) * cmasks[k - 1].size() + crank[cm]) * R + (i - 1);
  };

  col_layer[1].assign(cmasks[1].size() * L, kInf);
  for (int j = 0; j < L; ++j) col_layer[1][col_idx(1, 0, 1u << j, j)] = c(0, j);
  for (int k = 1; k < m; ++k) {
    row_layer[k + 1].assign(rmasks[k].size() * cmasks[k].size() * R, kInf);
    for (std::uint32_t rm : rmasks[k - 1]) {
      for (std::uint32_t cm : cmasks[k]) {
        for (int j = 0; j < L; ++j) {
          if (!(cm >> j & 1u)) continue;
          const double base = col_layer[k][col_idx(k, rm, cm, j)];
          if (base == kInf) continue;
          for (int i = 1; i < m; ++i) {
            if (rm >> (i - 1) & 1u) continue;
            double& dst = row_layer[k + 1][row_idx(k + 1, rm | 1u << (i - 1), cm, i)];
            dst = std::min(dst, base + c(i, j));
          }
        }
      }
    }
    col_layer[k + 1].assign(rmasks[k].size() * cmasks[k + 1].size() * L, kInf);
    for (std::uint32_t rm : rmasks[k]) {
      for (std::uint32_t cm : cmasks[k]) {
        for (int i = 1; i < m; ++i) {
          if (!(rm >> (i - 1) & 1u)) continue;
          const double base = row_layer[k + 1][row_idx(k + 1, rm, cm, i)];
          if (base == kInf) continue;
          for (int j = 0; j < L; ++j) {
            if (cm >> j & 1u) continue;
            double& dst = col_layer[k + 1][col_idx(k + 1, rm, cm | 1u << j, j)];
            dst = std::min(dst, base + c(i, j));
          }
        }
      }
    }
  }

  const std::uint32_t full_r = (1u << R) - 1;
  double best = kInf;
  std::uint32_t best_cm = 0;
  int best_j = -1;
  for (std::uint32_t cm : cmasks[m]) {
    for (int j = 0; j < L; ++j) {
      if (!(cm >> j & 1u)) continue;
      const double v = col_layer[m][col_idx(m, full_r, cm, j)] + c(0, j);
      if (v < best) {
        best = v;
        best_cm = cm;
        best_j = j;
      }
    }
  }

  // Walk back by recomputing the argmin at every step.
  r.cost = best;
  push_edge(r, o, 0, best_j);
  std::uint32_t rm = full_r, cm = best_cm;
  int j = best_j;
  for (int k = m; k >= 2; --k) {
    int bi = -1;
    double bv = kInf;
    const std::uint32_t cm_prev = cm & ~(1u << j);
    for (int i = 1; i < m; ++i) {
      if (!(rm >> (i - 1) & 1u)) continue;
      const double v = row_layer[k][row_idx(k, rm, cm_prev, i)] + c(i, j);
      if (v < bv) {
        bv = v;
        bi = i;
      }
    }
    push_edge(r, o, bi, j);
    cm = cm_prev;
    const std::uint32_t rm_prev = rm & ~(1u << (bi - 1));
    int bj = -1;
    bv = kInf;
    for (int jj = 0; jj < L; ++jj) {
      if (!(cm >> jj & 1u)) continue;
      const double v = col_layer[k - 1][col_idx(k - 1, rm_prev, cm, jj)] + c(bi, jj);
      if (v < bv) {
        bv = v;
        bj = jj;
      }
    }
    push_edge(r, o, bi, bj);
    rm = rm_prev;
    j = bj;
  }
  push_edge(r, o, 0, j);
  return r;
}

// Minimum over members of G_m and over m-subsets of the larger side.
SolveResult enumeration_cost(const Oriented& o, const GraphFamily& family, const CostParams& params) {
  const int m = static_cast<int>(o.rows->size());
  const int L = static_cast<int>(o.cols->size());
  SolveResult r;
  if (m < family.kappa0) return r;
  if (m > kEnumerationLimit) throw SizeLimitError("enumeration solver supports at most 5 points on the smaller side");
  const auto graphs = enumerate_family(m, family);
  if (binom(L, m) * static_cast<double>(graphs.size()) * (2 * m + 1) > kEnumerationWorkLimit) {
    throw SizeLimitError("enumeration solver exceeds its work budget");
  }
  const CostMatrix c = power_cost_matrix(*o.rows, *o.cols, params.p());
  double best = kInf;
  std::vector<int> best_subset;
  std::size_t best_graph = 0;
  std::vector<int> subset(m);
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    for (std::size_t g = 0; g < graphs.size(); ++g) {
      double total = 0.0;
      for (auto [i, j] : graphs[g].edges) total += c(i, subset[j]);
      if (total < best) {
        best = total;
        best_subset = subset;
        best_graph = g;
      }
    }
    // next m-subset of [L] in lexicographic order
    int t = m - 1;
    while (t >= 0 && subset[t] == L - m + t) --t;
    if (t < 0) break;
    ++subset[t];
    for (int u = t + 1; u < m; ++u) subset[u] = subset[u - 1] + 1;
  }
  r.cost = best;
  for (auto [i, j] : graphs[best_graph].edges) push_edge(r, o, i, best_subset[j]);
  return r;
}

// ---- axiom checks on bitmask graphs: edge (i, j) of an n-graph is bit i*n+j.

using Mask = std::uint32_t;

Mask to_mask(const BipartiteGraph& g) {
  Mask m = 0;
  for (auto [i, j] : g.edges) m |= Mask{1} << (i * g.n + j);
  return m;
}

// Invariant under row and column relabeling: minimum over column
// permutations of the sorted list of row neighborhoods.
std::vector<std::uint32_t> canonical(const BipartiteGraph& g) {
  const int n = g.n;
  std::vector<std::uint32_t> rows(n, 0);
  for (auto [i, j] : g.edges) rows[i] |= 1u << j;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint32_t> best;
  do {
    std::vector<std::uint32_t> cur(n, 0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) if (rows[i] >> j & 1u) cur[i] |= 1u << perm[j];
    }
    std::sort(cur.begin(), cur.end());
    if (best.empty() || cur < best) best = std::move(cur);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<BipartiteGraph> representatives(const std::vector<BipartiteGraph>& all) {
  std::map<std::vector<std::uint32_t>, std::size_t> seen;
  std::vector<BipartiteGraph> reps;
  for (const auto& g : all) {
    if (seen.emplace(canonical(g), reps.size()).second) reps.push_back(g);
  }
  return reps;
}

int nearest(Mask h, const std::vector<Mask>& members) {
  int best = std::numeric_limits<int>::max();
  for (Mask g : members) best = std::min(best, std::popcount(h ^ g));
  return best;
}

}  // namespace

GraphFamily GraphFamily::SpanningTree(int max_degree) {
  if (max_degree < 2) throw std::invalid_argument("spanning tree degree bound must be >= 2");
  return {FamilyKind::SpanningTreeMaxDeg, max_degree, 1, max_degree};
}

GraphFamily GraphFamily::RRegular(int r) {
  if (r < 2) throw std::invalid_argument("r-regular family needs r >= 2");
  return {FamilyKind::RRegularConnected, r, r, 11 * r};
}

int GraphFamily::degree_bound() const {
  switch (kind) {
    case FamilyKind::Matching: return 1;
    case FamilyKind::TspTour: return 2;
    case FamilyKind::SpanningTreeMaxDeg:
    case FamilyKind::RRegularConnected: return param;
  }
  return 0;
}

std::string GraphFamily::tag() const {
  switch (kind) {
    case FamilyKind::Matching: return "matching";
    case FamilyKind::TspTour: return "tsp";
    case FamilyKind::SpanningTreeMaxDeg: return "tree:" + std::to_string(param);
    case FamilyKind::RRegularConnected: return "rreg:" + std::to_string(param);
  }
  return "";
}

GraphFamily GraphFamily::FromTag(const std::string& tag) {
  if (tag == "matching") return Matching();
  if (tag == "tsp") return TspTour();
  const auto colon = tag.find(':');
  const std::string head = tag.substr(0, colon);
  int param = 0;
  if (colon != std::string::npos) {
    try {
      std::size_t used = 0;
      param = std::stoi(tag.substr(colon + 1), &used);
      if (used != tag.size() - colon - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("bad graph family parameter in '" + tag + "'");
    }
  }
  if (head == "tree") return SpanningTree(colon == std::string::npos ? 3 : param);
  if (head == "rreg") return RRegular(colon == std::string::npos ? 2 : param);
  throw std::invalid_argument("unknown graph family '" + tag + "'");
}

bool is_member(const BipartiteGraph& g, const GraphFamily& family) {
  const int n = g.n;
  if (n < family.kappa0) return false;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [i, j] = g.edges[e];
    if (i < 0 || j < 0 || i >= n || j >= n) return false;
    if (e > 0 && !(g.edges[e - 1] < g.edges[e])) return false;
  }
  const auto deg = degrees(g);
  const int bound = family.degree_bound();
  switch (family.kind) {
    case FamilyKind::Matching:
      return std::all_of(deg.begin(), deg.end(), [](int d) { return d == 1; });
    case FamilyKind::TspTour:
    case FamilyKind::RRegularConnected:
      return std::all_of(deg.begin(), deg.end(), [&](int d) { return d == bound; }) &&
             connected(n, g.edges);
    case FamilyKind::SpanningTreeMaxDeg:
      return static_cast<int>(g.edges.size()) == 2 * n - 1 &&
             std::all_of(deg.begin(), deg.end(), [&](int d) { return d <= bound; }) &&
             connected(n, g.edges);
  }
  return false;
}

std::vector<BipartiteGraph> enumerate_family(int n, const GraphFamily& family) {
  if (n < 0) throw std::invalid_argument("graph size must be non-negative");
  if (n > kEnumerationLimit) throw SizeLimitError("graph enumeration is limited to n <= 5");
  if (n < family.kappa0) return {};
  switch (family.kind) {
    case FamilyKind::Matching: {
      std::vector<BipartiteGraph> out;
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        BipartiteGraph g{n, {}};
        for (int i = 0; i < n; ++i) g.edges.emplace_back(i, perm[i]);
        out.push_back(std::move(g));
      } while (std::next_permutation(perm.begin(), perm.end()));
      return out;
    }
    case FamilyKind::TspTour: return enumerate_regular(n, 2);
    case FamilyKind::RRegularConnected: return enumerate_regular(n, family.param);
    case FamilyKind::SpanningTreeMaxDeg: return enumerate_trees(n, family.param);
  }
  return {};
}

BipartiteGraph certificate_graph(const SolveResult& r) {
  std::vector<std::size_t> xs, ys;
  for (auto [i, j] : r.matched) {
    xs.push_back(i);
    ys.push_back(j);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  BipartiteGraph g{static_cast<int>(std::max(xs.size(), ys.size())), {}};
  for (auto [i, j] : r.matched) {
    const auto a = std::lower_bound(xs.begin(), xs.end(), i) - xs.begin();
    const auto b = std::lower_bound(ys.begin(), ys.end(), j) - ys.begin();
    g.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  std::sort(g.edges.begin(), g.edges.end());
  if (xs.size() != ys.size()) g.n = -1;  // not a balanced graph; never a member
  return g;
}

SolveResult generic_cost(const PointCloud& x, const PointCloud& y, const GraphFamily& family,
                         const CostParams& params) {
  require_same_dim(x, y);
  if (family.kind == FamilyKind::Matching) return m_p_cost(x, y, params);
  const Oriented o = orient(x, y);
  SolveResult r = family.kind == FamilyKind::TspTour ? tsp_rectangular_dp(o, params)
                                                     : enumeration_cost(o, family, params);
  finish(r, x, y);
  return r;
}

SolveResult tsp_exact_dp(const PointCloud& x, const PointCloud& y, const CostParams& params) {
  require_same_dim(x, y);
  if (x.size() != y.size()) throw std::invalid_argument("exact tour recursion needs |X| = |Y|");
  if (x.size() > static_cast<std::size_t>(kTspDpLimit)) {
    throw SizeLimitError("exact tour recursion is limited to 12 points per side");
  }
  SolveResult r = tsp_rectangular_dp(orient(x, y), params);
  finish(r, x, y);
  return r;
}

SolveResult tsp_heuristic(const PointCloud& x, const PointCloud& y, const CostParams& params) {
  require_same_dim(x, y);
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("tour heuristic needs |X| = |Y| >= 2");
  const int n = static_cast<int>(x.size());
  const int N = 2 * n;
  const CostMatrix c = power_cost_matrix(x, y, params.p());
  // Vertex v < n is X_v, v >= n is Y_{v-n}.
  auto cost = [&](int a, int b) { return a < n ? c(a, b - n) : c(b, a - n); };

  auto greedy = [&](int start) {
    std::vector<int> tour;
    tour.reserve(N);
    std::vector<char> used_x(n, 0), used_y(n, 0);
    int cur = start;
    used_x[start] = 1;
    tour.push_back(start);
    for (int step = 1; step < N; ++step) {
      const bool on_x = cur < n;
      int best = -1;
      double bv = kInf;
      for (int k = 0; k < n; ++k) {
        if ((on_x ? used_y : used_x)[k]) continue;
        const double v = on_x ? c(cur, k) : c(k, cur - n);
        if (v < bv) {
          bv = v;
          best = k;
        }
      }
      (on_x ? used_y : used_x)[best] = 1;
      cur = on_x ? n + best : best;
      tour.push_back(cur);
    }
    return tour;
  };
  auto length = [&](const std::vector<int>& t) {
    double total = 0.0;
    for (int k = 0; k < N; ++k) total += cost(t[k], t[(k + 1) % N]);
    return total;
  };
  // Replacing edges (t_i, t_i+1) and (t_j, t_j+1) by (t_i, t_j) and
  // (t_i+1, t_j+1) keeps the tour alternating iff i and j differ in parity.
  auto two_opt = [&](std::vector<int>& t) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < N - 2; ++i) {
        for (int j = i + 3; j < N; j += 2) {
          if (i == 0 && j == N - 1) continue;
          const int a = t[i], b = t[i + 1], u = t[j], v = t[(j + 1) % N];
          const double delta = cost(a, u) + cost(b, v) - cost(a, b) - cost(u, v);
          if (delta < -1e-12 * (1.0 + std::abs(cost(a, b) + cost(u, v)))) {
            std::reverse(t.begin() + i + 1, t.begin() + j + 1);
            improved = true;
          }
        }
      }
    }
  };

  const int starts = std::min(n, 8);
  std::vector<int> best_tour;
  double best_len = kInf;
  std::vector<std::vector<int>> candidates;
  for (int s = 0; s < starts; ++s) candidates.push_back(greedy(static_cast<int>(static_cast<long>(s) * n / starts)));
  if (n > 64) {
    // Only the best construction is polished at scale.
    auto it = std::min_element(candidates.begin(), candidates.end(),
                               [&](const auto& a, const auto& b) { return length(a) < length(b); });
    candidates = {*it};
  }
  for (auto& t : candidates) {
    two_opt(t);
    const double len = length(t);
    if (len < best_len) {
      best_len = len;
      best_tour = t;
    }
  }

  SolveResult r;
  r.exact = false;
  r.cost = best_len;
  for (int k = 0; k < N; ++k) {
    int a = best_tour[k], b = best_tour[(k + 1) % N];
    if (a >= n) std::swap(a, b);
    r.matched.emplace_back(a, b - n);
  }
  finish(r, x, y);
  return r;
}

AxiomReport check_axioms(const GraphFamily& family, int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (n_max > kEnumerationLimit) throw SizeLimitError("axiom checks are limited to n_max <= 5");
  AxiomReport rep;
  rep.family = family;
  rep.n_max = n_max;

  std::vector<std::vector<BipartiteGraph>> all(n_max + 1), reps(n_max + 1);
  std::vector<std::vector<Mask>> masks(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    all[n] = enumerate_family(n, family);
    for (const auto& g : all[n]) {
      masks[n].push_back(to_mask(g));
      for (int d : degrees(g)) rep.max_degree = std::max(rep.max_degree, d);
    }
    if (!all[n].empty() && rep.observed_kappa0 < 0) rep.observed_kappa0 = n;
    if ((n >= family.kappa0) != !all[n].empty() && n >= 1) rep.nonempty_ok = false;
    reps[n] = representatives(all[n]);
  }
  rep.degree_ok = rep.max_degree <= family.degree_bound();

  // Places the edges of an n-graph at row/column offset `off` inside an
  // N-graph mask.
  auto embed = [](const BipartiteGraph& g, int N, int off) {
    Mask m = 0;
    for (auto [i, j] : g.edges) m |= Mask{1} << ((i + off) * N + (j + off));
    return m;
  };

  for (int n = 1; n <= n_max; ++n) {
    for (int m = 1; n + m <= n_max; ++m) {
      if (all[n].empty()) continue;
      const int N = n + m;
      if (!all[m].empty()) {
        for (const auto& g : reps[n]) {
          for (const auto& h : reps[m]) {
            const Mask merged = embed(g, N, 0) | embed(h, N, n);
            rep.merge_changes = std::max(rep.merge_changes, nearest(merged, masks[N]));
          }
        }
      } else if (m < family.kappa0) {
        for (const auto& g : reps[n]) {
          rep.merge_empty_changes = std::max(rep.merge_empty_changes, nearest(embed(g, N, 0), masks[N]));
        }
      }
    }
  }
  const int budget = 2 * family.kappa;
  rep.merge_ok = rep.merge_changes <= budget && rep.merge_empty_changes <= budget;

  // Restriction: drop one row and one column of G (any pair, since the
  // representatives fix labels only up to relabeling) and repair.
  for (int n = family.kappa0 + 1; n <= n_max; ++n) {
    const int k = n - 1;
    for (const auto& g : reps[n]) {
      for (int dr = 0; dr < n; ++dr) {
        for (int dc = 0; dc < n; ++dc) {
          Mask m = 0;
          for (auto [i, j] : g.edges) {
            if (i == dr || j == dc) continue;
            m |= Mask{1} << ((i - (i > dr)) * k + (j - (j > dc)));
          }
          rep.restriction_changes = std::max(rep.restriction_changes, nearest(m, masks[k]));
        }
      }
    }
  }
  rep.restriction_ok = rep.restriction_changes <= 2 * std::max(family.kappa, 1);
  return rep;
}

}  // namespace bipfunc
