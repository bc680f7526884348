#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bipfunc/matching.hpp"
#include "bipfunc/sampling.hpp"

namespace bipfunc {

enum class FunctionalKind { Matching, TspHeuristic };

std::string functional_name(FunctionalKind kind);

struct ExperimentConfig {
  FunctionalKind functional = FunctionalKind::Matching;
  CostParams params{1.0};
  int dim = 3;
  MeasureSpec measure{UniformBox{BoxRegion::UnitCube(3)}};
  std::vector<double> n_schedule;
  // Trials per schedule entry; a single value applies to every entry.
  std::vector<std::size_t> trials{1};
  std::uint64_t seed = 1;
  bool poissonized = true;
  // Use the boundary functional on the measure's support box.
  bool boundary = false;
  int threads = 1;
};

// Throws ConfigError naming the offending fields. Returns warnings, e.g.
// for d <= 2p where the limit theory does not apply.
std::vector<std::string> check_config(const ExperimentConfig& cfg);

bool in_theory(const ExperimentConfig& cfg);

// Points per side above which matching runs are refused.
inline constexpr std::size_t kMaxExperimentPoints = 8000;

struct EstimateRecord {
  double n = 0.0;
  std::size_t trials = 0;
  double mean = 0.0;
  double stderr_ = 0.0;  // sample std / sqrt(trials)
  double ratio = 0.0;    // mean / n^{1 - p/d}
  std::vector<double> samples;  // per-trial values in trial order
};

// Per-trial cost of trial `index` at intensity n; trial i always uses seed
// trial_seed(cfg.seed, i), so runs with equal seeds are paired.
double run_trial(const ExperimentConfig& cfg, double n, std::size_t index);

EstimateRecord summarize(double n, std::vector<double> samples, double rate_exponent);

std::vector<EstimateRecord> run_convergence(const ExperimentConfig& cfg);

struct BetaEstimate {
  double beta = 0.0;
  double uncertainty = 0.0;
  double stderr_ = 0.0;  // of the ratio at n_max
  // Intercept of ratio = beta + c n^{-correction}; secondary estimate.
  double beta_fit = 0.0;
};

// beta = ratio at the largest n; uncertainty = max(1.96 SE, |ratio(n_max) -
// ratio(n_max / 2)|), using the preceding entry when n_max / 2 is not on
// the schedule. Needs at least 3 records.
BetaEstimate estimate_beta(const std::vector<EstimateRecord>& records, double correction = 1.0 / 3.0);

// Integral of f^{1 - p/d} over the absolutely continuous part; singular
// parts contribute 0. Heavy-tailed measures are rejected.
double density_functional(const MeasureSpec& measure, double p, int d);

struct DensityReport {
  double integral = 0.0;
  BetaEstimate beta;        // uniform cube, plain
  BetaEstimate beta_prime;  // uniform cube, boundary
  std::vector<EstimateRecord> records;
  double lower = 0.0;  // beta' I - 3 sigma
  double upper = 0.0;  // beta I + 3 sigma
  bool within = false;
  std::vector<std::string> warnings;
};

// Calibrates beta and beta' on the uniform cube with the same schedule and
// seeds, then checks the measure's ratio at n_max against the sandwich.
DensityReport run_density_limit(const ExperimentConfig& cfg);

struct DecayReport {
  std::vector<EstimateRecord> records;
  bool decayed = false;  // ratio(n_max) < ratio(n_min) / 2
  std::vector<std::string> warnings;
};

DecayReport run_singular_decay(const ExperimentConfig& cfg);

struct GapRow {
  double n = 0.0;
  double mean_fixed = 0.0;
  double mean_poisson = 0.0;
  double normalized_gap = 0.0;  // |fixed - poisson| / n^{1 - p/d}
  double stderr_ = 0.0;         // of the paired difference, normalized
};

struct GapReport {
  std::vector<EstimateRecord> fixed;
  std::vector<EstimateRecord> poisson;
  std::vector<GapRow> rows;
  int inversions = 0;  // steps where the normalized gap grows
  bool decreasing = false;  // inversions <= 1
};

GapReport run_poissonization_gap(const ExperimentConfig& cfg);

struct TailMaxConfig {
  double alpha = 8.0;
  double gamma = 2.0;
  int dim = 3;
  // Defaults to HeavyTailRadial{alpha, dim}.
  std::optional<MeasureSpec> measure;
  std::vector<double> n_schedule;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct TailRow {
  double n = 0.0;
  double moment = 0.0;  // (E T_n^gamma)^{1/gamma}
  double ratio = 0.0;   // moment / n^{1/alpha}
};

struct TailReport {
  std::vector<TailRow> rows;
  std::vector<EstimateRecord> records;  // of T_n^gamma, with ratio as in TailRow
  double slope = 0.0;        // log moment against log n
  double ratio_slope = 0.0;  // log ratio against log n
  bool bounded = false;      // ratio_slope <= 0.05
};

// T_n = max_i |X_i| over n fixed-size draws. Throws if gamma >= alpha.
TailReport run_tail_max(const TailMaxConfig& cfg);

struct ConcentrationRow {
  double n = 0.0;
  double mean = 0.0;
  double std = 0.0;
  double envelope = 0.0;  // 4 C Delta^p sqrt(2 n log 2)
  double std_over_sqrt_n = 0.0;
  double std_over_rate = 0.0;
};

struct ConcentrationReport {
  std::vector<ConcentrationRow> rows;
  std::vector<EstimateRecord> records;
  bool within_envelope = false;
};

// Needs bounded support and at least 30 trials per entry.
ConcentrationReport run_concentration(const ExperimentConfig& cfg);

// ---- output

void write_records_csv(std::ostream& out, const std::vector<EstimateRecord>& records, const std::string& functional,
                       double p, int d, std::uint64_t seed, bool header = true);

nlohmann::json to_json(const EstimateRecord& r);
nlohmann::json to_json(const BetaEstimate& b);
nlohmann::json to_json(const DensityReport& r);
nlohmann::json to_json(const DecayReport& r);
nlohmann::json to_json(const GapReport& r);
nlohmann::json to_json(const TailReport& r);
nlohmann::json to_json(const ConcentrationReport& r);

}  // namespace bipfunc
