#include "bipfunc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace bipfunc {

namespace {

constexpr double kWeightTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_weights(const std::vector<double>& w, const char* what) {
  if (w.empty()) throw std::invalid_argument(std::string(what) + ": no weights");
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + ": weights must be finite and non-negative");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw std::invalid_argument(std::string(what) + ": weights must sum to 1");
  }
}

std::size_t pick_index(const std::vector<double>& weights, StreamRng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    last_positive = k;
    acc += weights[k];
    if (u < acc) return k;
  }
  return last_positive;
}

Point uniform_in(const BoxRegion& box, StreamRng& rng) {
  Point p(box.dim());
  for (int a = 0; a < box.dim(); ++a) p[a] = box.lo()[a] + box.side(a) * rng.uniform();
  return p;
}

}  // namespace

int measure_dim(const MeasureSpec& m) {
  return std::visit(Overloaded{
                        [](const UniformBox& u) { return u.box.dim(); },
                        [](const BlockDensity& b) { return b.partition.root().dim(); },
                        [](const SingularSegment& s) { return static_cast<int>(s.a.size()); },
                        [](const CantorMeasure&) { return 1; },
                        [](const HeavyTailRadial& h) { return h.dim; },
                        [](const Mixture& mix) {
                          if (mix.parts.empty()) throw std::invalid_argument("empty mixture");
                          return measure_dim(mix.parts.front());
                        },
                    },
                    m.kind);
}

void validate(const MeasureSpec& m) {
  std::visit(Overloaded{
                 [](const UniformBox&) {},
                 [](const BlockDensity& b) {
                   if (b.weights.size() != b.partition.size()) {
                     throw std::invalid_argument("block density: one weight per cell required");
                   }
                   check_weights(b.weights, "block density");
                 },
                 [](const SingularSegment& s) {
                   if (s.a.empty() || s.a.size() != s.b.size()) {
                     throw std::invalid_argument("segment endpoints must share a dimension");
                   }
                   for (double c : s.a) if (!std::isfinite(c)) throw std::invalid_argument("segment endpoint not finite");
                   for (double c : s.b) if (!std::isfinite(c)) throw std::invalid_argument("segment endpoint not finite");
                 },
                 [](const CantorMeasure& c) {
                   if (c.depth < 1 || c.depth > 60) throw std::invalid_argument("cantor depth must be in [1, 60]");
                 },
                 [](const HeavyTailRadial& h) {
                   if (!(h.alpha > 0.0) || !std::isfinite(h.alpha)) {
                     throw std::invalid_argument("heavy tail exponent must be positive");
                   }
                   if (h.dim < 1) throw std::invalid_argument("heavy tail dimension must be >= 1");
                 },
                 [](const Mixture& mix) {
                   if (mix.parts.empty() || mix.parts.size() != mix.weights.size()) {
                     throw std::invalid_argument("mixture: one weight per component required");
                   }
                   check_weights(mix.weights, "mixture");
                   const int d = measure_dim(mix.parts.front());
                   for (const auto& part : mix.parts) {
                     validate(part);
                     if (measure_dim(part) != d) throw std::invalid_argument("mixture: dimension mismatch");
                   }
                 },
             },
             m.kind);
}

std::optional<BoxRegion> support_box(const MeasureSpec& m) {
  return std::visit(
      Overloaded{
          [](const UniformBox& u) -> std::optional<BoxRegion> { return u.box; },
          [](const BlockDensity& b) -> std::optional<BoxRegion> { return b.partition.root(); },
          [](const SingularSegment& s) -> std::optional<BoxRegion> {
            Point lo(s.a.size()), hi(s.a.size());
            for (std::size_t k = 0; k < s.a.size(); ++k) {
              lo[k] = std::min(s.a[k], s.b[k]);
              hi[k] = std::max(s.a[k], s.b[k]);
              if (lo[k] == hi[k]) {
                lo[k] -= 0.5;
                hi[k] += 0.5;
              }
            }
            return BoxRegion(lo, hi);
          },
          [](const CantorMeasure&) -> std::optional<BoxRegion> { return BoxRegion::UnitCube(1); },
          [](const HeavyTailRadial&) -> std::optional<BoxRegion> { return std::nullopt; },
          [](const Mixture& mix) -> std::optional<BoxRegion> {
            std::optional<BoxRegion> acc;
            for (const auto& part : mix.parts) {
              auto box = support_box(part);
              if (!box) return std::nullopt;
              if (!acc) {
                acc = box;
                continue;
              }
              Point lo = acc->lo(), hi = acc->hi();
              for (int k = 0; k < box->dim(); ++k) {
                lo[k] = std::min(lo[k], box->lo()[k]);
                hi[k] = std::max(hi[k], box->hi()[k]);
              }
              acc = BoxRegion(lo, hi);
            }
            return acc;
          },
      },
      m.kind);
}

Point sample_point(const MeasureSpec& m, StreamRng& rng) {
  return std::visit(
      Overloaded{
          [&](const UniformBox& u) { return uniform_in(u.box, rng); },
          [&](const BlockDensity& b) {
            return uniform_in(b.partition.cells()[pick_index(b.weights, rng)], rng);
          },
          [&](const SingularSegment& s) {
            const double t = rng.uniform();
            Point p(s.a.size());
            for (std::size_t k = 0; k < p.size(); ++k) p[k] = s.a[k] + t * (s.b[k] - s.a[k]);
            return p;
          },
          [&](const CantorMeasure& c) {
            double x = 0.0, scale = 1.0;
            for (int k = 0; k < c.depth; ++k) {
              scale /= 3.0;
              if (rng() & 1ULL) x += 2.0 * scale;
            }
            return Point{x};
          },
          [&](const HeavyTailRadial& h) {
            const double radius = std::pow(rng.uniform_pos(), -1.0 / h.alpha);
            Point p(h.dim);
            if (h.dim == 1) {
              p[0] = (rng() & 1ULL) ? radius : -radius;
              return p;
            }
            std::normal_distribution<double> normal;
            double norm = 0.0;
            do {
              norm = 0.0;
              for (auto& c : p) {
                c = normal(rng);
                norm += c * c;
              }
            } while (norm == 0.0);
            norm = std::sqrt(norm);
            for (auto& c : p) c *= radius / norm;
            return p;
          },
          [&](const Mixture& mix) { return sample_point(mix.parts[pick_index(mix.weights, rng)], rng); },
      },
      m.kind);
}

std::pair<PointCloud, PointCloud> sample_pair(const SampleConfig& cfg) {
  validate(cfg.measure);
  if (!(cfg.n >= 0.0) || !std::isfinite(cfg.n)) {
    throw std::invalid_argument("sample size must be finite and non-negative");
  }
  std::uint64_t count_x = 0, count_y = 0;
  if (cfg.poissonized) {
    StreamRng counts(cfg.seed, 0);
    if (cfg.n > 0.0) {
      std::poisson_distribution<std::uint64_t> poisson(cfg.n);
      count_x = poisson(counts);
      count_y = poisson(counts);
    }
  } else {
    if (cfg.n != std::floor(cfg.n)) {
      throw std::invalid_argument("fixed-size sampling needs an integer n");
    }
    count_x = count_y = static_cast<std::uint64_t>(cfg.n);
  }
  const int d = measure_dim(cfg.measure);
  auto draw = [&](std::uint64_t stream, std::uint64_t count) {
    StreamRng rng(cfg.seed, stream);
    PointCloud cloud(d);
    cloud.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) cloud.push_back(sample_point(cfg.measure, rng));
    return cloud;
  };
  return {draw(1, count_x), draw(2, count_y)};
}

double max_radius(const PointCloud& x, const PointCloud& y) {
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, euclid_norm(x[i]));
  for (std::size_t j = 0; j < y.size(); ++j) best = std::max(best, euclid_norm(y[j]));
  return best;
}

}  // namespace bipfunc
