#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "bipfunc/experiments.hpp"
#include "bipfunc/geometry.hpp"

namespace bipfunc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kSizeLimit = 2, kViolation = 3 };

// "lo..hi" for a cube, or "a,b,c..u,v,w" for a general box.
BoxRegion parse_box(const std::string& text, int dim);

struct SolveArgs {
  std::string functional = "matching";  // matching | tsp | tsp-heur | tree | rreg
  double p = 1.0;
  std::string points_x;
  std::string points_y;
  bool boundary = false;
  std::string box;  // empty: unit cube
  double eps = 0.0;
  int degree = 3;    // tree
  int r = 2;         // rreg
  int aug_cap = -1;  // boundary padding per side; negative selects the default
};

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);

enum class ExperimentKind { Convergence, DensityLimit, SingularDecay, PoissonGap, TailMax, Concentration };

std::string kind_name(ExperimentKind kind);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Convergence;
  ExperimentConfig config;
  TailMaxConfig tail;  // tail-max only
};

// Sectioned key-value text ([experiment], [measure], [measure.<part>]).
// Throws ConfigError listing every offending key.
ExperimentSpec parse_experiment_config(std::istream& in);
ExperimentSpec load_experiment_config(const std::string& path);

struct ExperimentArgs {
  std::string config_path;
  std::string out_dir;  // empty: $BIPFUNC_OUT_DIR, else "."
  int threads = 1;
};

// Writes <kind>.csv and <kind>.json into the output directory.
int cmd_experiment(const ExperimentArgs& args, std::ostream& out, std::ostream& err);

struct VerifyArgs {
  std::string suite = "all";  // all | subadd | regularity | inverse | boundary | homogeneity | axioms
  std::uint64_t seed = 1;
  std::size_t instances = 500;
  std::string out_dir;
  int threads = 1;
  // Test fixture: adds perturb * (|X| + |Y|) to the matching and tour
  // functionals so that the suite must fail.
  double perturb = 0.0;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

// Full command line: `bipfunc <solve|experiment|verify> ...`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bipfunc::cli
