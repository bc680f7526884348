#include "bipfunc/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bipfunc/boundary.hpp"
#include "bipfunc/errors.hpp"
#include "bipfunc/graph_opt.hpp"
#include "bipfunc/io.hpp"
#include "bipfunc/lemma_suite.hpp"

namespace bipfunc::cli {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double to_number(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("'" + s + "' is not a number");
  return v;
}

std::vector<double> to_numbers(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(to_number(s));
  return out;
}

// Reads typed values out of one ini section and remembers which keys were
// used and which failed, so that every problem is reported at once.
class Section {
 public:
  Section(const pt::ptree* tree, std::string name, std::vector<std::string>& bad, std::vector<std::string>& why)
      : tree_(tree), name_(std::move(name)), bad_(bad), why_(why) {}

  bool has(const std::string& key) const { return tree_ && tree_->get_child_optional(key); }

  std::optional<std::string> text(const std::string& key) {
    used_.insert(key);
    if (!tree_) return std::nullopt;
    auto v = tree_->get_optional<std::string>(key);
    if (v) {
      std::string s = *v;
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    }
    return std::nullopt;
  }

  template <class F>
  auto get(const std::string& key, F&& parse, decltype(parse(std::string())) fallback, bool required = false) {
    const auto t = text(key);
    if (!t) {
      if (required) fail(key, "is required");
      return fallback;
    }
    try {
      return parse(*t);
    } catch (const std::exception& e) {
      fail(key, e.what());
      return fallback;
    }
  }

  double number(const std::string& key, double fallback, bool required = false) {
    return get(key, to_number, fallback, required);
  }

  std::vector<double> numbers(const std::string& key, bool required = false) {
    return get(key, to_numbers, std::vector<double>{}, required);
  }

  bool flag(const std::string& key, bool fallback) {
    return get(
        key,
        [](const std::string& s) {
          if (s == "true" || s == "1" || s == "yes") return true;
          if (s == "false" || s == "0" || s == "no") return false;
          throw std::invalid_argument("'" + s + "' is not a boolean");
        },
        fallback);
  }

  void fail(const std::string& key, const std::string& msg) {
    bad_.push_back(qualified(key));
    why_.push_back(qualified(key) + " " + msg);
  }

  void reject_unknown() {
    if (!tree_) return;
    for (const auto& [key, v] : *tree_) {
      if (!used_.count(key)) fail(key, "is not a recognized key");
    }
  }

  std::string qualified(const std::string& key) const { return name_ + "." + key; }

 private:
  const pt::ptree* tree_;
  std::string name_;
  std::set<std::string> used_;
  std::vector<std::string>& bad_;
  std::vector<std::string>& why_;
};

Point broadcast(const std::vector<double>& v, int dim, Section& s, const std::string& key) {
  if (v.size() == 1) return Point(dim, v[0]);
  if (static_cast<int>(v.size()) != dim) {
    s.fail(key, "needs 1 or " + std::to_string(dim) + " values");
    return Point(dim, 0.0);
  }
  return v;
}

std::optional<MeasureSpec> parse_measure(Section& s, int dim, bool allow_mixture, const pt::ptree& root,
                                         std::vector<std::string>& bad, std::vector<std::string>& why);

BoxRegion parse_section_box(Section& s, int dim) {
  const auto lo = s.has("lo") ? broadcast(s.numbers("lo"), dim, s, "lo") : Point(dim, 0.0);
  const auto hi = s.has("hi") ? broadcast(s.numbers("hi"), dim, s, "hi") : Point(dim, 1.0);
  s.text("lo");
  s.text("hi");
  try {
    return BoxRegion(lo, hi);
  } catch (const std::exception& e) {
    s.fail("hi", e.what());
    return BoxRegion::UnitCube(dim);
  }
}

std::optional<MeasureSpec> parse_measure(Section& s, int dim, bool allow_mixture, const pt::ptree& root,
                                         std::vector<std::string>& bad, std::vector<std::string>& why) {
  const auto kind = s.text("kind").value_or("uniform");
  std::optional<MeasureSpec> m;
  if (kind == "uniform") {
    m = MeasureSpec{UniformBox{parse_section_box(s, dim)}};
  } else if (kind == "block") {
    const BoxRegion box = parse_section_box(s, dim);
    const int level = static_cast<int>(s.number("level", 1));
    const auto weights = s.numbers("weights", true);
    try {
      DyadicPartition part(box, level);
      if (weights.size() != part.size()) {
        s.fail("weights", "needs " + std::to_string(part.size()) + " values");
      } else {
        m = MeasureSpec{BlockDensity{part, weights}};
      }
    } catch (const std::exception& e) {
      s.fail("level", e.what());
    }
  } else if (kind == "segment") {
    const auto a = s.numbers("a", true), b = s.numbers("b", true);
    if (static_cast<int>(a.size()) != dim) s.fail("a", "needs " + std::to_string(dim) + " values");
    if (static_cast<int>(b.size()) != dim) s.fail("b", "needs " + std::to_string(dim) + " values");
    if (static_cast<int>(a.size()) == dim && static_cast<int>(b.size()) == dim) m = MeasureSpec{SingularSegment{a, b}};
  } else if (kind == "cantor") {
    const int depth = static_cast<int>(s.number("depth", 40));
    if (dim != 1) s.fail("kind", "cantor needs dim = 1");
    m = MeasureSpec{CantorMeasure{depth}};
  } else if (kind == "heavy-tail") {
    m = MeasureSpec{HeavyTailRadial{s.number("alpha", 8.0), dim}};
  } else if (kind == "mixture" && allow_mixture) {
    const auto names = split_list(s.text("parts").value_or(""));
    const auto weights = s.numbers("weights", true);
    if (names.empty()) s.fail("parts", "is required");
    if (weights.size() != names.size()) s.fail("weights", "needs one weight per part");
    Mixture mix{weights, {}};
    bool ok = weights.size() == names.size() && !names.empty();
    for (const auto& name : names) {
      const auto* sub = root.get_child_optional(pt::ptree::path_type("measure." + name, '/')).get_ptr();
      Section part(sub, "measure." + name, bad, why);
      if (!sub) {
        s.fail("parts", "names a missing section [measure." + name + "]");
        ok = false;
        continue;
      }
      auto pm = parse_measure(part, dim, false, root, bad, why);
      part.reject_unknown();
      if (pm) mix.parts.push_back(*pm);
      else ok = false;
    }
    if (ok) m = MeasureSpec{mix};
  } else {
    s.fail("kind", "unknown measure kind '" + kind + "'");
  }
  if (m) {
    try {
      validate(*m);
    } catch (const std::exception& e) {
      s.fail("kind", e.what());
      m.reset();
    }
  }
  return m;
}

ExperimentKind parse_kind(const std::string& s) {
  static const std::map<std::string, ExperimentKind> kinds = {
      {"convergence", ExperimentKind::Convergence},     {"density-limit", ExperimentKind::DensityLimit},
      {"singular-decay", ExperimentKind::SingularDecay}, {"poisson-gap", ExperimentKind::PoissonGap},
      {"tail-max", ExperimentKind::TailMax},             {"concentration", ExperimentKind::Concentration},
  };
  const auto it = kinds.find(s);
  if (it == kinds.end()) throw std::invalid_argument("unknown experiment kind '" + s + "'");
  return it->second;
}

fs::path output_dir(const std::string& requested) {
  if (!requested.empty()) return requested;
  if (const char* env = std::getenv("BIPFUNC_OUT_DIR"); env && *env) return env;
  return ".";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

nlohmann::json config_json(const ExperimentSpec& spec) {
  const auto& c = spec.config;
  nlohmann::json j = {{"kind", kind_name(spec.kind)}, {"seed", c.seed}};
  if (spec.kind == ExperimentKind::TailMax) {
    j["alpha"] = spec.tail.alpha;
    j["gamma"] = spec.tail.gamma;
    j["dim"] = spec.tail.dim;
    j["n_schedule"] = spec.tail.n_schedule;
    j["trials"] = spec.tail.trials;
    return j;
  }
  j["functional"] = functional_name(c.functional);
  j["p"] = c.params.p();
  j["eps"] = c.params.eps();
  j["dim"] = c.dim;
  j["n_schedule"] = c.n_schedule;
  j["trials"] = c.trials;
  j["poissonized"] = c.poissonized;
  j["boundary"] = c.boundary;
  j["in_theory"] = in_theory(c);
  return j;
}

// The matching (or tour) functional, optionally perturbed by the fixture.
Functional maybe_perturbed(Functional f, double perturb) {
  if (perturb == 0.0) return f;
  return [f, perturb](const PointCloud& x, const PointCloud& y, double p) {
    return f(x, y, p) + perturb * static_cast<double>(x.size() + y.size());
  };
}

void write_counterexample(const fs::path& dir, const LemmaReport& rep) {
  fs::create_directories(dir);
  write_text(dir / (rep.name + ".json"), rep.counterexample.dump(2) + "\n");
  const auto& inst = rep.counterexample["instance"];
  auto dump_cloud = [&](const std::string& label, const nlohmann::json& cloud) {
    std::ostringstream csv;
    write_cloud_csv(csv, cloud_from_json(cloud));
    write_text(dir / (rep.name + "_" + label + ".csv"), csv.str());
  };
  if (inst.contains("clouds"))
    for (const auto& [label, cloud] : inst["clouds"].items()) dump_cloud(label, cloud);
  for (const char* side : {"xs", "ys"}) {
    if (!inst.contains(side)) continue;
    for (std::size_t i = 0; i < inst[side].size(); ++i)
      dump_cloud(std::string(1, side[0]) + std::to_string(i + 1), inst[side][i]);
  }
}

}  // namespace

BoxRegion parse_box(const std::string& text, int dim) {
  const auto sep = text.find("..");
  if (sep == std::string::npos) throw std::invalid_argument("box must look like lo..hi");
  auto side = [&](const std::string& part) {
    const auto v = to_numbers(part);
    if (v.size() == 1) return Point(dim, v[0]);
    if (static_cast<int>(v.size()) != dim) {
      throw std::invalid_argument("box corner needs 1 or " + std::to_string(dim) + " coordinates");
    }
    return Point(v);
  };
  return BoxRegion(side(text.substr(0, sep)), side(text.substr(sep + 2)));
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const PointCloud x = read_cloud_csv_file(args.points_x);
    const PointCloud y = read_cloud_csv_file(args.points_y);
    if (x.dim() != y.dim()) {
      err << "error: dimension mismatch: " << args.points_x << " has d=" << x.dim() << ", " << args.points_y
          << " has d=" << y.dim() << "\n";
      return kUsage;
    }
    const CostParams params(args.p, args.eps);
    GraphFamily family;
    bool heuristic = false;
    if (args.functional == "matching") family = GraphFamily::Matching();
    else if (args.functional == "tsp") family = GraphFamily::TspTour();
    else if (args.functional == "tsp-heur") {
      family = GraphFamily::TspTour();
      heuristic = true;
    } else if (args.functional == "tree") family = GraphFamily::SpanningTree(args.degree);
    else if (args.functional == "rreg") family = GraphFamily::RRegular(args.r);
    else {
      err << "error: unknown functional '" << args.functional << "'\n";
      return kUsage;
    }

    SolveResult r;
    if (args.boundary) {
      if (heuristic) {
        err << "error: tsp-heur has no boundary variant\n";
        return kUsage;
      }
      const BoxRegion box = args.box.empty() ? BoxRegion::UnitCube(x.dim()) : parse_box(args.box, x.dim());
      r = family.kind == FamilyKind::Matching ? boundary_matching_cost(x, y, params, box)
                                              : boundary_generic_cost(x, y, family, params, box, args.aug_cap);
    } else if (heuristic) {
      if (x.size() != y.size()) {
        err << "error: tsp-heur needs equally many points on both sides\n";
        return kUsage;
      }
      r = x.size() < 2 ? SolveResult{} : tsp_heuristic(x, y, params);
    } else {
      r = generic_cost(x, y, family, params);
    }
    auto j = to_json(r);
    j["functional"] = args.boundary ? "boundary-" + family.tag() : (heuristic ? "tsp-heur" : family.tag());
    j["p"] = args.p;
    out << j.dump() << "\n";
    return kOk;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kSizeLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::DensityLimit: return "density-limit";
    case ExperimentKind::SingularDecay: return "singular-decay";
    case ExperimentKind::PoissonGap: return "poisson-gap";
    case ExperimentKind::TailMax: return "tail-max";
    case ExperimentKind::Concentration: return "concentration";
  }
  return "convergence";
}

ExperimentSpec parse_experiment_config(std::istream& in) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what(), {"<syntax>"});
  }
  std::vector<std::string> bad, why;
  for (const auto& [name, child] : root) {
    if (child.empty() && !child.data().empty()) {
      bad.push_back(name);
      why.push_back(name + " appears outside a section");
    } else if (name != "experiment" && name != "measure" && name.rfind("measure.", 0) != 0) {
      bad.push_back("[" + name + "]");
      why.push_back("[" + name + "] is not a recognized section");
    }
  }
  const auto* exp_tree = root.get_child_optional("experiment").get_ptr();
  Section e(exp_tree, "experiment", bad, why);
  if (!exp_tree) e.fail("kind", "is required (missing [experiment] section)");

  ExperimentSpec spec;
  spec.kind = e.get("kind", parse_kind, ExperimentKind::Convergence, exp_tree != nullptr);
  const int dim = static_cast<int>(e.number("dim", 3));
  if (dim < 1) e.fail("dim", "must be >= 1");
  const double p = e.number("p", 1.0);
  const double eps = e.number("eps", 0.0);
  const auto schedule = e.numbers("n_schedule", true);
  const auto trials = e.numbers("trials");
  const auto seed = e.get(
      "seed", [](const std::string& s) { return static_cast<std::uint64_t>(std::stoull(s)); }, std::uint64_t{1});

  auto& c = spec.config;
  try {
    c.params = CostParams(p, eps);
  } catch (const std::exception& ex) {
    e.fail("p", ex.what());
  }
  c.dim = std::max(dim, 1);
  c.n_schedule = schedule;
  c.seed = seed;
  c.trials.clear();
  for (double t : trials) {
    if (!(t >= 1.0) || t != std::floor(t)) {
      e.fail("trials", "entries must be positive integers");
      break;
    }
    c.trials.push_back(static_cast<std::size_t>(t));
  }
  if (c.trials.empty()) c.trials = {1};
  c.poissonized = e.flag("poissonized", true);
  c.boundary = e.flag("boundary", false);
  const auto functional = e.text("functional").value_or("matching");
  if (functional == "matching") c.functional = FunctionalKind::Matching;
  else if (functional == "tsp-heuristic") c.functional = FunctionalKind::TspHeuristic;
  else e.fail("functional", "must be matching or tsp-heuristic");

  const double alpha = e.number("alpha", 8.0);
  const double gamma = e.number("gamma", 2.0);
  e.reject_unknown();

  const auto* measure_tree = root.get_child_optional("measure").get_ptr();
  Section ms(measure_tree, "measure", bad, why);
  if (spec.kind == ExperimentKind::TailMax) {
    spec.tail.alpha = alpha;
    spec.tail.gamma = gamma;
    spec.tail.dim = c.dim;
    spec.tail.n_schedule = schedule;
    spec.tail.trials = c.trials.front();
    spec.tail.seed = seed;
    if (c.trials.size() != 1) e.fail("trials", "tail-max takes a single trial count");
    if (!(gamma > 0.0 && gamma < alpha)) e.fail("gamma", "must satisfy 0 < gamma < alpha");
    if (measure_tree) spec.tail.measure = parse_measure(ms, c.dim, true, root, bad, why);
  } else {
    c.measure = MeasureSpec{UniformBox{BoxRegion::UnitCube(c.dim)}};
    if (measure_tree) {
      if (auto m = parse_measure(ms, c.dim, true, root, bad, why)) c.measure = *m;
    }
  }
  ms.reject_unknown();

  // schedule and combination rules; a measure that failed to parse has
  // already been reported and is replaced by the unit cube here
  if (spec.kind != ExperimentKind::TailMax) {
    try {
      check_config(c);
    } catch (const ConfigError& ce) {
      for (const auto& k : ce.keys()) bad.push_back((k == "measure" ? "" : "experiment.") + k);
      // "invalid experiment config; key: msg; ..." -> one line per problem
      const std::string text = ce.what();
      for (std::size_t at = text.find("; "); at != std::string::npos;) {
        const std::size_t next = text.find("; ", at + 2);
        why.push_back(text.substr(at + 2, next == std::string::npos ? std::string::npos : next - at - 2));
        at = next;
      }
    }
  } else if (spec.tail.n_schedule.empty() ||
             !std::is_sorted(schedule.begin(), schedule.end(), std::less_equal<double>())) {
    e.fail("n_schedule", "must be a nonempty strictly increasing list");
  }
  if (!bad.empty()) {
    std::string msg = "invalid experiment config:";
    for (const auto& w : why) msg += "\n  " + w;
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    throw ConfigError(msg, bad);
  }
  return spec;
}

ExperimentSpec load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_experiment_config(in);
}

int cmd_experiment(const ExperimentArgs& args, std::ostream& out, std::ostream& err) {
  try {
    ExperimentSpec spec = load_experiment_config(args.config_path);
    spec.config.threads = args.threads;
    spec.tail.threads = args.threads;
    const auto& c = spec.config;
    const std::string kind = kind_name(spec.kind);

    nlohmann::json summary = {{"schema_version", kSchemaVersion}, {"config", config_json(spec)}};
    std::ostringstream csv;
    std::string label = functional_name(c.functional);
    if (c.boundary) label = "boundary-" + label;
    switch (spec.kind) {
      case ExperimentKind::Convergence: {
        summary["warnings"] = check_config(c);
        const auto records = run_convergence(c);
        write_records_csv(csv, records, label, c.params.p(), c.dim, c.seed);
        nlohmann::json rs = nlohmann::json::array();
        for (const auto& r : records) rs.push_back(to_json(r));
        summary["records"] = rs;
        if (records.size() >= 3) summary["beta"] = to_json(estimate_beta(records));
        break;
      }
      case ExperimentKind::DensityLimit: {
        const auto rep = run_density_limit(c);
        write_records_csv(csv, rep.records, label, c.params.p(), c.dim, c.seed);
        summary["report"] = to_json(rep);
        break;
      }
      case ExperimentKind::SingularDecay: {
        const auto rep = run_singular_decay(c);
        write_records_csv(csv, rep.records, label, c.params.p(), c.dim, c.seed);
        summary["report"] = to_json(rep);
        break;
      }
      case ExperimentKind::PoissonGap: {
        const auto rep = run_poissonization_gap(c);
        write_records_csv(csv, rep.fixed, label + "-fixed", c.params.p(), c.dim, c.seed);
        write_records_csv(csv, rep.poisson, label + "-poissonized", c.params.p(), c.dim, c.seed, false);
        summary["report"] = to_json(rep);
        break;
      }
      case ExperimentKind::TailMax: {
        const auto rep = run_tail_max(spec.tail);
        write_records_csv(csv, rep.records, "tail-max", spec.tail.gamma, spec.tail.dim, spec.tail.seed);
        summary["report"] = to_json(rep);
        break;
      }
      case ExperimentKind::Concentration: {
        const auto rep = run_concentration(c);
        write_records_csv(csv, rep.records, label, c.params.p(), c.dim, c.seed);
        summary["report"] = to_json(rep);
        break;
      }
    }
    const fs::path dir = output_dir(args.out_dir);
    fs::create_directories(dir);
    write_text(dir / (kind + ".csv"), csv.str());
    write_text(dir / (kind + ".json"), summary.dump(2) + "\n");
    out << "wrote " << (dir / (kind + ".csv")).string() << " and " << (dir / (kind + ".json")).string() << "\n";
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\noffending keys:";
    for (const auto& k : e.keys()) err << ' ' << k;
    err << "\n";
    return kUsage;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kSizeLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  static const std::set<std::string> suites = {"all",      "subadd",      "regularity", "inverse",
                                               "boundary", "homogeneity", "axioms"};
  if (!suites.count(args.suite)) {
    err << "error: unknown suite '" << args.suite << "'\n";
    return kUsage;
  }
  auto wants = [&](const char* s) { return args.suite == "all" || args.suite == s; };
  try {
    const Functional matching = maybe_perturbed(family_functional(GraphFamily::Matching()), args.perturb);
    const Functional tour = maybe_perturbed(family_functional(GraphFamily::TspTour()), args.perturb);
    const CheckOptions opt{args.threads, true};
    CorpusOptions base;
    base.seed = args.seed;
    base.count = args.instances;
    CorpusOptions small = base;  // keeps exact tours within the solver's range
    small.max_group = 3;
    small.max_groups = 3;
    CorpusOptions low_p = base;
    low_p.exponents = {0.5, 1.0};
    CorpusOptions low_p_small = small;
    low_p_small.exponents = {0.5, 1.0};

    std::vector<LemmaReport> reports;
    if (wants("subadd")) {
      reports.push_back(check_subadditivity_matching(group_corpus(base), matching, opt));
      reports.push_back(check_subadditivity_generic(GraphFamily::TspTour(), group_corpus(small), tour, opt));
    }
    if (wants("regularity")) reports.push_back(check_regularity_matching(regularity_corpus(base), matching, opt));
    if (wants("inverse")) {
      reports.push_back(check_inverse_subadd_matching(inverse_corpus(low_p), matching, opt));
      reports.push_back(check_inverse_subadd_tsp(inverse_corpus(low_p_small), tour, opt));
    }
    if (wants("boundary")) reports.push_back(check_boundary_superadditivity(superadditivity_corpus(base), {}, opt));
    if (wants("homogeneity")) {
      reports.push_back(check_homogeneity(matching, homogeneity_corpus(base), opt, "homogeneity_matching"));
      reports.push_back(check_homogeneity(tour, homogeneity_corpus(base), opt, "homogeneity_tsp"));
    }

    nlohmann::json summary = {{"schema_version", kSchemaVersion}, {"seed", args.seed}, {"checks", nlohmann::json::array()}};
    bool failed = false;
    for (const auto& r : reports) {
      summary["checks"].push_back({{"name", r.name},
                                   {"instances", r.instances},
                                   {"violations", r.violations},
                                   {"worst_margin", r.worst_margin}});
      if (!r.passed()) {
        failed = true;
        write_counterexample(output_dir(args.out_dir), r);
      }
    }
    if (wants("axioms")) {
      const std::vector<std::pair<GraphFamily, int>> fams = {{GraphFamily::Matching(), 5},
                                                             {GraphFamily::TspTour(), 5},
                                                             {GraphFamily::SpanningTree(3), 4},
                                                             {GraphFamily::RRegular(2), 5}};
      for (const auto& [f, n] : fams) {
        const auto a = check_axioms(f, n);
        summary["checks"].push_back({{"name", "axioms_" + f.tag()},
                                     {"n_max", a.n_max},
                                     {"ok", a.ok()},
                                     {"observed_kappa0", a.observed_kappa0},
                                     {"merge_changes", a.merge_changes},
                                     {"restriction_changes", a.restriction_changes}});
        failed = failed || !a.ok();
      }
    }
    summary["passed"] = !failed;
    out << summary.dump(2) << "\n";
    return failed ? kViolation : kOk;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kSizeLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bipartite Euclidean functionals: exact solvers, experiments and property checks"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve one instance and print the certificate as JSON");
  s->add_option("--functional", solve.functional, "matching | tsp | tsp-heur | tree | rreg")
      ->check(CLI::IsMember({"matching", "tsp", "tsp-heur", "tree", "rreg"}));
  s->add_option("--p", solve.p, "Edge cost exponent")->check(CLI::PositiveNumber);
  s->add_option("--points-x", solve.points_x, "CSV file with header x0,...,x{d-1}")->required();
  s->add_option("--points-y", solve.points_y, "CSV file with header x0,...,x{d-1}")->required();
  s->add_flag("--boundary", solve.boundary, "Use the boundary functional");
  s->add_option("--box", solve.box, "Region lo..hi (default: unit cube)");
  s->add_option("--eps", solve.eps, "Boundary penalty offset")->check(CLI::NonNegativeNumber);
  s->add_option("--degree", solve.degree, "Maximum degree for tree");
  s->add_option("--r", solve.r, "Degree for rreg");
  s->add_option("--aug-cap", solve.aug_cap, "Boundary padding per side");

  ExperimentArgs exp;
  auto* e = app.add_subcommand("experiment", "Run an experiment config; writes CSV and a JSON summary");
  e->add_option("config", exp.config_path, "Config file")->required();
  e->add_option("--out", exp.out_dir, "Output directory (default: $BIPFUNC_OUT_DIR or .)");
  e->add_option("--threads", exp.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Run the inequality battery; exit 3 on any violation");
  v->add_option("--suite", ver.suite, "all | subadd | regularity | inverse | boundary | homogeneity | axioms");
  v->add_option("--seed", ver.seed, "Corpus seed");
  v->add_option("--instances", ver.instances, "Instances per check");
  v->add_option("--out", ver.out_dir, "Directory for counterexamples");
  v->add_option("--threads", ver.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  v->add_option("--perturb-solver", ver.perturb)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (*s) return cmd_solve(solve, out, err);
  if (*e) return cmd_experiment(exp, out, err);
  return cmd_verify(ver, out, err);
}

}  // namespace bipfunc::cli
