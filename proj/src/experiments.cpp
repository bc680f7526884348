#include "bipfunc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <set>
#include <stdexcept>

#include "bipfunc/boundary.hpp"
#include "bipfunc/errors.hpp"
#include "bipfunc/graph_opt.hpp"
#include "bipfunc/io.hpp"
#include "bipfunc/parallel.hpp"
#include "bipfunc/rng.hpp"

namespace bipfunc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double rate(double n, double exponent) { return std::pow(n, exponent); }

double cost_exponent(const ExperimentConfig& cfg) { return 1.0 - cfg.params.p() / cfg.dim; }

std::size_t trials_at(const ExperimentConfig& cfg, std::size_t k) {
  return cfg.trials.size() == 1 ? cfg.trials.front() : cfg.trials[k];
}

// Least-squares slope of log y against log x over positive entries.
double log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) continue;
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  const double den = k * sxx - sx * sx;
  return k >= 2 && den > 0.0 ? (k * sxy - sx * sy) / den : 0.0;
}

std::vector<EstimateRecord> run_schedule(const ExperimentConfig& cfg) {
  check_config(cfg);
  std::vector<EstimateRecord> out;
  for (std::size_t k = 0; k < cfg.n_schedule.size(); ++k) {
    const double n = cfg.n_schedule[k];
    std::vector<double> values(trials_at(cfg, k));
    parallel_for(values.size(), cfg.threads, [&](std::size_t i) { values[i] = run_trial(cfg, n, i); });
    out.push_back(summarize(n, std::move(values), cost_exponent(cfg)));
  }
  return out;
}

// Pieces (box, density) of the absolutely continuous part, scaled by `w`.
void ac_pieces(const MeasureSpec& m, double w, std::vector<std::pair<BoxRegion, double>>& out) {
  std::visit(Overloaded{
                 [&](const UniformBox& u) {
                   if (u.box.volume() > 0.0) out.emplace_back(u.box, w / u.box.volume());
                 },
                 [&](const BlockDensity& b) {
                   for (std::size_t c = 0; c < b.partition.size(); ++c) {
                     const auto& cell = b.partition.cells()[c];
                     if (b.weights[c] > 0.0) out.emplace_back(cell, w * b.weights[c] / cell.volume());
                   }
                 },
                 [](const SingularSegment&) {},
                 [](const CantorMeasure&) {},
                 [](const HeavyTailRadial&) {
                   throw std::invalid_argument("density functional: heavy-tailed measures are not supported");
                 },
                 [&](const Mixture& mix) {
                   for (std::size_t k = 0; k < mix.parts.size(); ++k) ac_pieces(mix.parts[k], w * mix.weights[k], out);
                 },
             },
             m.kind);
}

}  // namespace

std::string functional_name(FunctionalKind kind) {
  return kind == FunctionalKind::Matching ? "matching" : "tsp-heuristic";
}

std::vector<std::string> check_config(const ExperimentConfig& cfg) {
  std::vector<std::string> bad;
  std::vector<std::string> why;
  auto fail = [&](const std::string& key, const std::string& msg) {
    bad.push_back(key);
    why.push_back(key + ": " + msg);
  };
  if (cfg.dim < 1) fail("dim", "must be >= 1");
  try {
    validate(cfg.measure);
    if (measure_dim(cfg.measure) != cfg.dim) fail("measure", "dimension differs from dim");
  } catch (const std::invalid_argument& e) {
    fail("measure", e.what());
  }
  if (cfg.n_schedule.empty()) fail("n_schedule", "is empty");
  for (std::size_t k = 0; k < cfg.n_schedule.size(); ++k) {
    if (!(cfg.n_schedule[k] > 0.0) || !std::isfinite(cfg.n_schedule[k])) {
      fail("n_schedule", "entries must be positive");
      break;
    }
    if (k > 0 && !(cfg.n_schedule[k] > cfg.n_schedule[k - 1])) {
      fail("n_schedule", "must be strictly increasing");
      break;
    }
    if (!cfg.poissonized && cfg.n_schedule[k] != std::floor(cfg.n_schedule[k])) {
      fail("n_schedule", "fixed-size runs need integer entries");
      break;
    }
  }
  if (cfg.trials.empty() || (cfg.trials.size() != 1 && cfg.trials.size() != cfg.n_schedule.size())) {
    fail("trials", "give one value or one per schedule entry");
  } else if (std::any_of(cfg.trials.begin(), cfg.trials.end(), [](std::size_t t) { return t == 0; })) {
    fail("trials", "must be >= 1");
  }
  if (cfg.functional == FunctionalKind::TspHeuristic) {
    if (cfg.poissonized) fail("poissonized", "the tour heuristic needs equal sides; use fixed-size sampling");
    if (cfg.boundary) fail("boundary", "no boundary variant of the tour heuristic");
  }
  if (cfg.boundary) {
    try {
      if (!support_box(cfg.measure)) fail("boundary", "needs a measure with bounded support");
    } catch (const std::exception&) {
    }
  }
  if (!bad.empty()) {
    std::string msg = "invalid experiment config";
    for (const auto& w : why) msg += "; " + w;
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    throw ConfigError(msg, bad);
  }
  std::vector<std::string> warnings;
  if (!in_theory(cfg)) warnings.push_back("d <= 2p: outside the regime of the limit theory (out-of-theory)");
  return warnings;
}

bool in_theory(const ExperimentConfig& cfg) { return cfg.dim > 2.0 * cfg.params.p(); }

double run_trial(const ExperimentConfig& cfg, double n, std::size_t index) {
  const auto [x, y] = sample_pair({cfg.measure, n, cfg.poissonized, trial_seed(cfg.seed, index)});
  if (std::max(x.size(), y.size()) > kMaxExperimentPoints) {
    throw SizeLimitError("experiment sample of " + std::to_string(std::max(x.size(), y.size())) +
                         " points per side exceeds the limit of " + std::to_string(kMaxExperimentPoints));
  }
  if (cfg.functional == FunctionalKind::TspHeuristic) {
    return x.size() < 2 ? 0.0 : tsp_heuristic(x, y, cfg.params).cost;
  }
  if (cfg.boundary) return boundary_matching_cost(x, y, cfg.params, *support_box(cfg.measure)).cost;
  return m_p_cost(x, y, cfg.params).cost;
}

EstimateRecord summarize(double n, std::vector<double> samples, double rate_exponent) {
  EstimateRecord r;
  r.n = n;
  r.trials = samples.size();
  if (!samples.empty()) {
    r.mean = pairwise_sum(samples) / static_cast<double>(samples.size());
    if (samples.size() > 1) {
      std::vector<double> sq(samples.size());
      for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = (samples[i] - r.mean) * (samples[i] - r.mean);
      const double var = pairwise_sum(sq) / static_cast<double>(samples.size() - 1);
      r.stderr_ = std::sqrt(var / static_cast<double>(samples.size()));
    }
  }
  r.ratio = r.mean / rate(n, rate_exponent);
  r.samples = std::move(samples);
  return r;
}

std::vector<EstimateRecord> run_convergence(const ExperimentConfig& cfg) { return run_schedule(cfg); }

BetaEstimate estimate_beta(const std::vector<EstimateRecord>& records, double correction) {
  if (records.size() < 3) throw std::invalid_argument("estimate_beta needs at least 3 records");
  const auto& last = records.back();
  const double se_ratio = last.mean > 0.0 ? last.stderr_ * last.ratio / last.mean : 0.0;
  const EstimateRecord* half = &records[records.size() - 2];
  for (const auto& r : records) {
    if (r.n == last.n / 2.0) half = &r;
  }
  BetaEstimate b;
  b.beta = last.ratio;
  b.stderr_ = se_ratio;
  b.uncertainty = std::max(1.96 * se_ratio, std::abs(last.ratio - half->ratio));

  // ratio = beta + c t with t = n^{-correction}
  double st = 0, sr = 0, stt = 0, str = 0;
  const double k = static_cast<double>(records.size());
  for (const auto& r : records) {
    const double t = std::pow(r.n, -correction);
    st += t;
    sr += r.ratio;
    stt += t * t;
    str += t * r.ratio;
  }
  const double den = k * stt - st * st;
  b.beta_fit = den > 0.0 ? (sr * stt - st * str) / den : b.beta;
  return b;
}

double density_functional(const MeasureSpec& measure, double p, int d) {
  validate(measure);
  if (measure_dim(measure) != d) throw std::invalid_argument("density functional: dimension mismatch");
  std::vector<std::pair<BoxRegion, double>> pieces;
  ac_pieces(measure, 1.0, pieces);
  if (pieces.empty()) return 0.0;
  const double e = 1.0 - p / d;
  if (pieces.size() == 1) return pieces[0].first.volume() * std::pow(pieces[0].second, e);

  // Overlapping pieces: refine to the grid of all box faces, on which the
  // density is constant.
  std::vector<std::vector<double>> cuts(d);
  for (int a = 0; a < d; ++a) {
    std::set<double> s;
    for (const auto& [box, f] : pieces) {
      s.insert(box.lo()[a]);
      s.insert(box.hi()[a]);
    }
    cuts[a].assign(s.begin(), s.end());
  }
  double total = 0.0;
  Point lo(d), hi(d), mid(d);
  std::function<void(int)> walk = [&](int a) {
    if (a == d) {
      double f = 0.0, vol = 1.0;
      for (const auto& [box, dens] : pieces)
        if (box.contains(mid)) f += dens;
      for (int k = 0; k < d; ++k) vol *= hi[k] - lo[k];
      if (f > 0.0) total += vol * std::pow(f, e);
      return;
    }
    for (std::size_t i = 0; i + 1 < cuts[a].size(); ++i) {
      lo[a] = cuts[a][i];
      hi[a] = cuts[a][i + 1];
      mid[a] = 0.5 * (lo[a] + hi[a]);
      walk(a + 1);
    }
  };
  walk(0);
  return total;
}

DensityReport run_density_limit(const ExperimentConfig& cfg) {
  DensityReport rep;
  rep.warnings = check_config(cfg);
  if (cfg.functional != FunctionalKind::Matching) {
    throw ConfigError("density-limit runs use the matching functional", {"functional"});
  }
  rep.integral = density_functional(cfg.measure, cfg.params.p(), cfg.dim);

  ExperimentConfig cube = cfg;
  cube.measure = MeasureSpec{UniformBox{BoxRegion::UnitCube(cfg.dim)}};
  cube.boundary = false;
  rep.beta = estimate_beta(run_schedule(cube));
  cube.boundary = true;
  rep.beta_prime = estimate_beta(run_schedule(cube));

  ExperimentConfig target = cfg;
  target.boundary = false;
  rep.records = run_schedule(target);
  const auto& last = rep.records.back();
  const double se_ratio = last.mean > 0.0 ? last.stderr_ * last.ratio / last.mean : 0.0;
  const double se_cal = std::max(rep.beta.stderr_, rep.beta_prime.stderr_);
  const double sigma = std::sqrt(se_ratio * se_ratio + std::pow(rep.integral * se_cal, 2));
  rep.lower = rep.beta_prime.beta * rep.integral - 3.0 * sigma;
  rep.upper = rep.beta.beta * rep.integral + 3.0 * sigma;
  rep.within = last.ratio >= rep.lower && last.ratio <= rep.upper;
  if (rep.beta_prime.beta > rep.beta.beta) rep.warnings.push_back("beta' estimate exceeds beta estimate");
  return rep;
}

DecayReport run_singular_decay(const ExperimentConfig& cfg) {
  DecayReport rep;
  rep.warnings = check_config(cfg);
  if (cfg.dim < 2) rep.warnings.push_back("d < 2: singular decay is only asserted for d >= 2 (out-of-theory)");
  rep.records = run_schedule(cfg);
  rep.decayed = rep.records.back().ratio < 0.5 * rep.records.front().ratio;
  return rep;
}

GapReport run_poissonization_gap(const ExperimentConfig& cfg) {
  ExperimentConfig fixed = cfg, poisson = cfg;
  fixed.poissonized = false;
  poisson.poissonized = true;
  check_config(fixed);
  GapReport rep;
  rep.fixed = run_schedule(fixed);
  rep.poisson = run_schedule(poisson);
  for (std::size_t k = 0; k < rep.fixed.size(); ++k) {
    const auto& f = rep.fixed[k];
    const auto& q = rep.poisson[k];
    std::vector<double> diff(f.samples.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f.samples[i] - q.samples[i];
    const auto d = summarize(f.n, diff, cost_exponent(cfg));
    GapRow row;
    row.n = f.n;
    row.mean_fixed = f.mean;
    row.mean_poisson = q.mean;
    row.normalized_gap = std::abs(f.mean - q.mean) / rate(f.n, cost_exponent(cfg));
    row.stderr_ = d.stderr_ / rate(f.n, cost_exponent(cfg));
    rep.rows.push_back(row);
  }
  for (std::size_t k = 1; k < rep.rows.size(); ++k)
    if (rep.rows[k].normalized_gap > rep.rows[k - 1].normalized_gap) ++rep.inversions;
  rep.decreasing = rep.inversions <= 1;
  return rep;
}

TailReport run_tail_max(const TailMaxConfig& cfg) {
  if (!(cfg.gamma > 0.0) || !(cfg.gamma < cfg.alpha)) throw std::invalid_argument("tail-max needs 0 < gamma < alpha");
  if (cfg.n_schedule.empty()) throw ConfigError("tail-max: empty schedule", {"n_schedule"});
  if (cfg.trials == 0) throw ConfigError("tail-max: trials must be >= 1", {"trials"});
  const MeasureSpec measure = cfg.measure ? *cfg.measure : MeasureSpec{HeavyTailRadial{cfg.alpha, cfg.dim}};
  validate(measure);
  TailReport rep;
  std::vector<double> ns, moments, ratios;
  for (double n : cfg.n_schedule) {
    if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError("tail-max: n must be a positive integer", {"n_schedule"});
    std::vector<double> values(cfg.trials);
    parallel_for(values.size(), cfg.threads, [&](std::size_t i) {
      StreamRng rng(trial_seed(cfg.seed, i), 0);
      double best = 0.0;
      for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
        const Point x = sample_point(measure, rng);
        best = std::max(best, euclid_norm(x));
      }
      values[i] = std::pow(best, cfg.gamma);
    });
    auto rec = summarize(n, std::move(values), 0.0);
    TailRow row;
    row.n = n;
    row.moment = std::pow(rec.mean, 1.0 / cfg.gamma);
    row.ratio = row.moment / std::pow(n, 1.0 / cfg.alpha);
    rec.ratio = row.ratio;
    rec.samples.clear();
    rep.records.push_back(std::move(rec));
    rep.rows.push_back(row);
    ns.push_back(n);
    moments.push_back(row.moment);
    ratios.push_back(row.ratio);
  }
  rep.slope = log_slope(ns, moments);
  rep.ratio_slope = log_slope(ns, ratios);
  rep.bounded = rep.ratio_slope <= 0.05;
  return rep;
}

ConcentrationReport run_concentration(const ExperimentConfig& cfg) {
  check_config(cfg);
  const auto box = support_box(cfg.measure);
  if (!box) throw ConfigError("concentration needs a measure with bounded support", {"measure"});
  for (std::size_t k = 0; k < cfg.n_schedule.size(); ++k) {
    if (trials_at(cfg, k) < 30) throw ConfigError("concentration needs at least 30 trials", {"trials"});
  }
  // one inserted or removed point moves the value by at most C diam^p
  const double C = cfg.functional == FunctionalKind::Matching ? 1.0 : 2.0;
  const double delta = std::pow(diameter(*box), cfg.params.p());
  ConcentrationReport rep;
  rep.records = run_schedule(cfg);
  rep.within_envelope = true;
  for (const auto& r : rep.records) {
    ConcentrationRow row;
    row.n = r.n;
    row.mean = r.mean;
    row.std = r.stderr_ * std::sqrt(static_cast<double>(r.trials));
    row.envelope = 4.0 * C * delta * std::sqrt(2.0 * r.n * std::log(2.0));
    row.std_over_sqrt_n = row.std / std::sqrt(r.n);
    row.std_over_rate = row.std / rate(r.n, cost_exponent(cfg));
    rep.within_envelope = rep.within_envelope && row.std <= row.envelope;
    rep.rows.push_back(row);
  }
  return rep;
}

void write_records_csv(std::ostream& out, const std::vector<EstimateRecord>& records, const std::string& functional,
                       double p, int d, std::uint64_t seed, bool header) {
  if (header) out << "n,trials,mean,stderr,ratio,functional,p,d,seed,schema_version\n";
  for (const auto& r : records) {
    out << format_double(r.n) << ',' << r.trials << ',' << format_double(r.mean) << ',' << format_double(r.stderr_)
        << ',' << format_double(r.ratio) << ',' << functional << ',' << format_double(p) << ',' << d << ',' << seed
        << ',' << kSchemaVersion << '\n';
  }
}

nlohmann::json to_json(const EstimateRecord& r) {
  return {{"n", r.n}, {"trials", r.trials}, {"mean", r.mean}, {"stderr", r.stderr_}, {"ratio", r.ratio}};
}

nlohmann::json to_json(const BetaEstimate& b) {
  return {{"beta", b.beta}, {"uncertainty", b.uncertainty}, {"stderr", b.stderr_}, {"beta_fit", b.beta_fit}};
}

namespace {

nlohmann::json records_json(const std::vector<EstimateRecord>& rs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rs) a.push_back(to_json(r));
  return a;
}

}  // namespace

nlohmann::json to_json(const DensityReport& r) {
  return {{"schema_version", kSchemaVersion},
          {"integral", r.integral},
          {"beta", to_json(r.beta)},
          {"beta_prime", to_json(r.beta_prime)},
          {"records", records_json(r.records)},
          {"lower", r.lower},
          {"upper", r.upper},
          {"within", r.within},
          {"warnings", r.warnings}};
}

nlohmann::json to_json(const DecayReport& r) {
  return {{"schema_version", kSchemaVersion},
          {"records", records_json(r.records)},
          {"decayed", r.decayed},
          {"warnings", r.warnings}};
}

nlohmann::json to_json(const GapReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& g : r.rows) {
    rows.push_back({{"n", g.n},
                    {"mean_fixed", g.mean_fixed},
                    {"mean_poisson", g.mean_poisson},
                    {"normalized_gap", g.normalized_gap},
                    {"stderr", g.stderr_}});
  }
  return {{"schema_version", kSchemaVersion}, {"rows", rows}, {"inversions", r.inversions}, {"decreasing", r.decreasing}};
}

nlohmann::json to_json(const TailReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& t : r.rows) rows.push_back({{"n", t.n}, {"moment", t.moment}, {"ratio", t.ratio}});
  return {{"schema_version", kSchemaVersion},
          {"rows", rows},
          {"slope", r.slope},
          {"ratio_slope", r.ratio_slope},
          {"bounded", r.bounded}};
}

nlohmann::json to_json(const ConcentrationReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : r.rows) {
    rows.push_back({{"n", c.n},
                    {"mean", c.mean},
                    {"std", c.std},
                    {"envelope", c.envelope},
                    {"std_over_sqrt_n", c.std_over_sqrt_n},
                    {"std_over_rate", c.std_over_rate}});
  }
  return {{"schema_version", kSchemaVersion}, {"rows", rows}, {"within_envelope", r.within_envelope}};
}

}  // namespace bipfunc
