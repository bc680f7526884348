#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "bipfunc/geometry.hpp"
#include "bipfunc/rng.hpp"

namespace bipfunc {

struct MeasureSpec;

struct UniformBox {
  BoxRegion box;
};

// Piecewise-constant density: cell k of the partition carries mass weights[k].
struct BlockDensity {
  DyadicPartition partition;
  std::vector<double> weights;
};

// Uniform law on the segment [a, b] in R^d.
struct SingularSegment {
  Point a;
  Point b;
};

// Middle-thirds Cantor measure on [0, 1] (d = 1), truncated after `depth`
// ternary digits.
struct CantorMeasure {
  int depth = 40;
};

// |X| has Pareto density alpha r^{-alpha-1} on [1, inf), direction uniform on
// the sphere; P(|X| >= t) <= t^{-alpha}.
struct HeavyTailRadial {
  double alpha;
  int dim;
};

struct Mixture {
  std::vector<double> weights;
  std::vector<MeasureSpec> parts;
};

struct MeasureSpec {
  std::variant<UniformBox, BlockDensity, SingularSegment, CantorMeasure, HeavyTailRadial, Mixture>
      kind;
};

int measure_dim(const MeasureSpec& m);

// Throws std::invalid_argument on unnormalized weights, alpha <= 0, or
// inconsistent dimensions.
void validate(const MeasureSpec& m);

// Smallest box containing the support, if the support is bounded.
std::optional<BoxRegion> support_box(const MeasureSpec& m);

Point sample_point(const MeasureSpec& m, StreamRng& rng);

struct SampleConfig {
  MeasureSpec measure;
  double n = 0.0;  // sample size, or intensity when poissonized
  bool poissonized = false;
  std::uint64_t seed = 0;
};

// X and Y are drawn from separate streams of the same seed, one point after
// another, so a fixed-size sample and a Poissonized sample with equal seeds
// share their leading points.
std::pair<PointCloud, PointCloud> sample_pair(const SampleConfig& cfg);

// Largest Euclidean norm over X and Y; 0 when both are empty.
double max_radius(const PointCloud& x, const PointCloud& y);

}  // namespace bipfunc
