#include "bipfunc/lemma_suite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bipfunc/boundary.hpp"
#include "bipfunc/io.hpp"
#include "bipfunc/parallel.hpp"
#include "bipfunc/rng.hpp"

namespace bipfunc {

namespace {

constexpr double kSlack = 1e-9;
constexpr double kRelTol = 1e-9;

struct Eval {
  double lhs = 0.0;
  double rhs = 0.0;
  bool violated = false;
};

Eval inequality(double lhs, double rhs) { return {lhs, rhs, lhs > rhs + kSlack}; }

double card_gap(const PointCloud& a, const PointCloud& b) {
  return a.size() > b.size() ? static_cast<double>(a.size() - b.size()) : static_cast<double>(b.size() - a.size());
}

PointCloud without(const PointCloud& c, std::size_t drop) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < c.size(); ++i) if (i != drop) keep.push_back(i);
  return c.select(keep);
}

PointCloud join(const PointCloud& a, const PointCloud& b) {
  PointCloud out = a;
  out.append(b);
  return out;
}

template <class I>
struct CheckSpec {
  std::string name;
  std::function<Eval(const I&)> eval;
  std::function<std::vector<PointCloud*>(I&)> clouds;
  std::function<nlohmann::json(const I&)> dump;
};

// Removes single points while the violation persists.
template <class I>
I shrink(const I& start, const CheckSpec<I>& spec) {
  I cur = start;
  bool progress = true;
  while (progress) {
    progress = false;
    const auto sizes = [&] {
      std::vector<std::size_t> s;
      for (PointCloud* c : spec.clouds(cur)) s.push_back(c->size());
      return s;
    }();
    for (std::size_t c = 0; c < sizes.size() && !progress; ++c) {
      for (std::size_t i = 0; i < sizes[c] && !progress; ++i) {
        I cand = cur;
        PointCloud* target = spec.clouds(cand)[c];
        *target = without(*target, i);
        Eval e;
        try {
          e = spec.eval(cand);
        } catch (const std::exception&) {
          continue;
        }
        if (e.violated) {
          cur = std::move(cand);
          progress = true;
        }
      }
    }
  }
  return cur;
}

template <class I>
LemmaReport run_check(const std::vector<I>& instances, const CheckSpec<I>& spec, const CheckOptions& opt) {
  std::vector<Eval> results(instances.size());
  parallel_for(instances.size(), opt.threads, [&](std::size_t i) { results[i] = spec.eval(instances[i]); });
  LemmaReport rep;
  rep.name = spec.name;
  rep.instances = instances.size();
  std::size_t first = instances.size();
  for (std::size_t i = 0; i < results.size(); ++i) {
    rep.worst_margin = std::max(rep.worst_margin, results[i].lhs - results[i].rhs);
    if (results[i].violated) {
      ++rep.violations;
      first = std::min(first, i);
    }
  }
  if (first < instances.size()) {
    const I small = opt.shrink ? shrink(instances[first], spec) : instances[first];
    const Eval e = spec.eval(small);
    rep.counterexample = {
        {"schema_version", kSchemaVersion},
        {"check", spec.name},
        {"instance_index", first},
        {"original_lhs", results[first].lhs},
        {"original_rhs", results[first].rhs},
        {"lhs", e.lhs},
        {"rhs", e.rhs},
        {"instance", spec.dump(small)},
    };
  }
  return rep;
}

// ---- corpus generation

enum class Shape { Uniform, Clustered, NearBoundary, Coincident };

class Drawer {
 public:
  Drawer(std::uint64_t seed, std::uint64_t index) : rng_(trial_seed(seed, index), 11) {}

  StreamRng& rng() { return rng_; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    if (v.empty()) throw std::invalid_argument("corpus option list is empty");
    return v[rng_() % v.size()];
  }

  int upto(int hi) { return hi <= 0 ? 0 : static_cast<int>(rng_() % static_cast<std::uint64_t>(hi + 1)); }

  BoxRegion box(int d) {
    if (rng_() & 1ULL) return BoxRegion::UnitCube(d);
    Point lo(d), hi(d);
    for (int k = 0; k < d; ++k) {
      lo[k] = -1.0 + 2.0 * rng_.uniform();
      hi[k] = lo[k] + 0.5 + 2.5 * rng_.uniform();
    }
    return BoxRegion(lo, hi);
  }

  // Picks a shape and the shared pool of centers for one instance.
  void start_instance(const BoxRegion& q) {
    shape_ = static_cast<Shape>(rng_() % 4);
    pool_.clear();
    const int centers = 2 + static_cast<int>(rng_() % 2);
    for (int c = 0; c < centers; ++c) pool_.push_back(uniform(q));
  }

  PointCloud cloud(const BoxRegion& q, int n) {
    PointCloud out(q.dim());
    for (int i = 0; i < n; ++i) out.push_back(point(q));
    return out;
  }

 private:
  Point uniform(const BoxRegion& q) {
    Point p(q.dim());
    for (int k = 0; k < q.dim(); ++k) p[k] = q.lo()[k] + q.side(k) * rng_.uniform();
    return p;
  }

  Point point(const BoxRegion& q) {
    switch (shape_) {
      case Shape::Uniform: return uniform(q);
      case Shape::Clustered: {
        Point p = pool_[rng_() % pool_.size()];
        for (int k = 0; k < q.dim(); ++k) {
          p[k] += 0.06 * q.side(k) * (rng_.uniform() - 0.5);
          p[k] = std::clamp(p[k], q.lo()[k], q.hi()[k]);
        }
        return p;
      }
      case Shape::NearBoundary: {
        Point p = uniform(q);
        const int axis = static_cast<int>(rng_() % q.dim());
        const double delta = (rng_() & 1ULL) ? 0.0 : 1e-3 * q.side(axis) * rng_.uniform();
        p[axis] = (rng_() & 1ULL) ? q.lo()[axis] + delta : q.hi()[axis] - delta;
        return p;
      }
      case Shape::Coincident: return pool_[rng_() % pool_.size()];
    }
    return uniform(q);
  }

  StreamRng rng_;
  Shape shape_ = Shape::Uniform;
  std::vector<Point> pool_;
};

nlohmann::json named_clouds(std::initializer_list<std::pair<const char*, const PointCloud*>> items) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, c] : items) j[name] = to_json(*c);
  return j;
}

nlohmann::json dump_groups(const GroupInstance& in) {
  nlohmann::json xs = nlohmann::json::array(), ys = nlohmann::json::array();
  for (const auto& c : in.xs) xs.push_back(to_json(c));
  for (const auto& c : in.ys) ys.push_back(to_json(c));
  return {{"box", to_json(in.q)}, {"p", in.p}, {"xs", xs}, {"ys", ys}};
}

std::vector<PointCloud*> group_clouds(GroupInstance& in) {
  std::vector<PointCloud*> out;
  for (auto& c : in.xs) out.push_back(&c);
  for (auto& c : in.ys) out.push_back(&c);
  return out;
}

CheckSpec<GroupInstance> group_spec(std::string name, const Functional& f, double C, bool with_one) {
  return {
      std::move(name),
      [f, C, with_one](const GroupInstance& in) {
        if (in.xs.size() != in.ys.size()) throw std::invalid_argument("group counts differ");
        PointCloud ux(in.q.dim()), uy(in.q.dim());
        double parts = 0.0, excess = 0.0;
        for (std::size_t i = 0; i < in.xs.size(); ++i) {
          ux.append(in.xs[i]);
          uy.append(in.ys[i]);
          parts += f(in.xs[i], in.ys[i], in.p);
          excess += (with_one ? 1.0 : 0.0) + card_gap(in.xs[i], in.ys[i]);
        }
        return inequality(f(ux, uy, in.p), parts + C * std::pow(diameter(in.q), in.p) * excess);
      },
      group_clouds,
      dump_groups,
  };
}

CheckSpec<InverseInstance> inverse_spec(std::string name, const Functional& f, bool tour) {
  return {
      std::move(name),
      [f, tour](const InverseInstance& in) {
        const double dp = std::pow(diameter(in.q), in.p);
        const double lhs = f(in.x1, in.y1, in.p);
        const double base = f(join(in.x1, in.x2), join(in.y1, in.y2), in.p) + f(in.x2, in.y2, in.p);
        const double extra = tour ? 2.0 * dp * (1.0 + card_gap(in.x1, in.y1) + card_gap(in.x2, in.y2))
                                  : dp * (card_gap(in.x1, in.y1) + 2.0 * card_gap(in.x2, in.y2));
        return inequality(lhs, base + extra);
      },
      [](InverseInstance& in) { return std::vector<PointCloud*>{&in.x1, &in.y1, &in.x2, &in.y2}; },
      [](const InverseInstance& in) {
        return nlohmann::json{{"box", to_json(in.q)},
                              {"p", in.p},
                              {"clouds", named_clouds({{"x1", &in.x1}, {"y1", &in.y1}, {"x2", &in.x2}, {"y2", &in.y2}})}};
      },
  };
}

void require_p_at_most_one(const std::vector<InverseInstance>& instances) {
  for (const auto& in : instances) {
    if (in.p > 1.0) throw std::invalid_argument("inverse subadditivity is only established for p <= 1");
  }
}

}  // namespace

BoundaryFunctional boundary_matching_functional() {
  return [](const PointCloud& x, const PointCloud& y, double p, const BoxRegion& s) {
    return boundary_matching_cost(x, y, CostParams(p), s).cost;
  };
}

std::vector<GroupInstance> group_corpus(const CorpusOptions& opt) {
  std::vector<GroupInstance> out;
  for (std::size_t i = 0; i < opt.count; ++i) {
    Drawer dr(opt.seed, i);
    const int d = dr.pick(opt.dims);
    const double p = dr.pick(opt.exponents);
    const BoxRegion q = dr.box(d);
    dr.start_instance(q);
    const int k = opt.min_groups + dr.upto(opt.max_groups - opt.min_groups);
    GroupInstance in{q, p, {}, {}};
    for (int g = 0; g < k; ++g) {
      in.xs.push_back(dr.cloud(q, dr.upto(opt.max_group)));
      in.ys.push_back(dr.cloud(q, dr.upto(opt.max_group)));
    }
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<RegularityInstance> regularity_corpus(const CorpusOptions& opt) {
  std::vector<RegularityInstance> out;
  for (std::size_t i = 0; i < opt.count; ++i) {
    Drawer dr(opt.seed, i);
    const int d = dr.pick(opt.dims);
    const double p = dr.pick(opt.exponents);
    const BoxRegion q = dr.box(d);
    dr.start_instance(q);
    const int half = std::max(1, opt.max_group / 2);
    RegularityInstance in{q, p,
                          dr.cloud(q, dr.upto(opt.max_group)), dr.cloud(q, dr.upto(half)), dr.cloud(q, dr.upto(half)),
                          dr.cloud(q, dr.upto(opt.max_group)), dr.cloud(q, dr.upto(half)), dr.cloud(q, dr.upto(half))};
    // Sometimes X1 = X2 and Y1 = Y2, where the bound is an identity plus slack.
    if (dr.rng()() % 8 == 0) {
      in.x2 = in.x1;
      in.y2 = in.y1;
    }
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<InverseInstance> inverse_corpus(const CorpusOptions& opt) {
  std::vector<InverseInstance> out;
  for (std::size_t i = 0; i < opt.count; ++i) {
    Drawer dr(opt.seed, i);
    const int d = dr.pick(opt.dims);
    const double p = dr.pick(opt.exponents);
    const BoxRegion q = dr.box(d);
    dr.start_instance(q);
    out.push_back({q, p, dr.cloud(q, dr.upto(opt.max_group)), dr.cloud(q, dr.upto(opt.max_group)),
                   dr.cloud(q, dr.upto(opt.max_group)), dr.cloud(q, dr.upto(opt.max_group))});
  }
  return out;
}

std::vector<HomogeneityInstance> homogeneity_corpus(const CorpusOptions& opt) {
  static const std::vector<double> lambdas = {0.5, 1.0, 2.0, 7.3};
  std::vector<HomogeneityInstance> out;
  for (std::size_t i = 0; i < opt.count; ++i) {
    Drawer dr(opt.seed, i);
    const int d = dr.pick(opt.dims);
    const double p = dr.pick(opt.exponents);
    const BoxRegion q = BoxRegion::UnitCube(d);
    dr.start_instance(q);
    HomogeneityInstance in{p, dr.pick(lambdas), Point(d, 0.0), dr.cloud(q, dr.upto(opt.max_group)),
                           dr.cloud(q, dr.upto(opt.max_group))};
    if (dr.rng()() % 4 != 0) {
      for (auto& c : in.shift) c = -5.0 + 10.0 * dr.rng().uniform();
    }
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<SuperadditivityInstance> superadditivity_corpus(const CorpusOptions& opt) {
  std::vector<SuperadditivityInstance> out;
  for (std::size_t i = 0; i < opt.count; ++i) {
    Drawer dr(opt.seed, i);
    const int d = dr.pick(opt.dims);
    const double p = dr.pick(opt.exponents);
    const BoxRegion q = dr.box(d);
    dr.start_instance(q);
    const int level = 1 + dr.upto(d == 3 ? 1 : 2);
    out.push_back({q, p, level, dr.cloud(q, dr.upto(opt.max_group)), dr.cloud(q, dr.upto(opt.max_group))});
  }
  return out;
}

LemmaReport check_subadditivity_matching(const std::vector<GroupInstance>& instances, const Functional& functional,
                                         const CheckOptions& opt) {
  return run_check(instances, group_spec("subadditivity_matching", functional, 0.5, false), opt);
}

LemmaReport check_regularity_matching(const std::vector<RegularityInstance>& instances, const Functional& functional,
                                      const CheckOptions& opt) {
  CheckSpec<RegularityInstance> spec{
      "regularity_matching",
      [f = functional](const RegularityInstance& in) {
        const double lhs = f(join(in.x, in.x1), join(in.y, in.y1), in.p);
        const double rhs = f(join(in.x, in.x2), join(in.y, in.y2), in.p) +
                           std::pow(diameter(in.q), in.p) *
                               static_cast<double>(in.x1.size() + in.x2.size() + in.y1.size() + in.y2.size());
        return inequality(lhs, rhs);
      },
      [](RegularityInstance& in) {
        return std::vector<PointCloud*>{&in.x, &in.x1, &in.x2, &in.y, &in.y1, &in.y2};
      },
      [](const RegularityInstance& in) {
        return nlohmann::json{{"box", to_json(in.q)},
                              {"p", in.p},
                              {"clouds", named_clouds({{"x", &in.x},
                                                       {"x1", &in.x1},
                                                       {"x2", &in.x2},
                                                       {"y", &in.y},
                                                       {"y1", &in.y1},
                                                       {"y2", &in.y2}})}};
      },
  };
  return run_check(instances, spec, opt);
}

LemmaReport check_subadditivity_generic(const GraphFamily& family, const std::vector<GroupInstance>& instances,
                                        const Functional& functional, const CheckOptions& opt) {
  const Functional f = functional ? functional : family_functional(family);
  const double C = (3.0 + family.kappa0) * family.kappa / 2.0;
  return run_check(instances, group_spec("subadditivity_" + family.tag(), f, C, true), opt);
}

LemmaReport check_inverse_subadd_matching(const std::vector<InverseInstance>& instances,
                                          const Functional& functional, const CheckOptions& opt) {
  require_p_at_most_one(instances);
  return run_check(instances, inverse_spec("inverse_subadditivity_matching", functional, false), opt);
}

LemmaReport check_inverse_subadd_tsp(const std::vector<InverseInstance>& instances, const Functional& functional,
                                     const CheckOptions& opt) {
  require_p_at_most_one(instances);
  return run_check(instances, inverse_spec("inverse_subadditivity_tsp", functional, true), opt);
}

LemmaReport check_homogeneity(const Functional& functional, const std::vector<HomogeneityInstance>& instances,
                              const CheckOptions& opt, const std::string& name) {
  CheckSpec<HomogeneityInstance> spec{
      name,
      [f = functional](const HomogeneityInstance& in) {
        auto map = [&](const PointCloud& c) {
          std::vector<double> flat = c.data();
          for (std::size_t k = 0; k < flat.size(); ++k) flat[k] = in.shift[k % in.shift.size()] + in.lambda * flat[k];
          return PointCloud(c.dim(), std::move(flat));
        };
        const double moved = f(map(in.x), map(in.y), in.p);
        const double scaled = std::pow(in.lambda, in.p) * f(in.x, in.y, in.p);
        const double gap = std::abs(moved - scaled);
        const double tol = kRelTol * std::max(std::abs(moved), std::abs(scaled)) + 1e-12;
        return Eval{gap, tol, gap > tol};
      },
      [](HomogeneityInstance& in) { return std::vector<PointCloud*>{&in.x, &in.y}; },
      [](const HomogeneityInstance& in) {
        return nlohmann::json{{"p", in.p},
                              {"lambda", in.lambda},
                              {"shift", in.shift},
                              {"clouds", named_clouds({{"x", &in.x}, {"y", &in.y}})}};
      },
  };
  return run_check(instances, spec, opt);
}

LemmaReport check_boundary_superadditivity(const std::vector<SuperadditivityInstance>& instances,
                                           const BoundaryFunctional& functional, const CheckOptions& opt) {
  CheckSpec<SuperadditivityInstance> spec{
      "boundary_superadditivity",
      [f = functional](const SuperadditivityInstance& in) {
        const DyadicPartition part(in.q, in.level);
        const auto xs = part.split(in.x);
        const auto ys = part.split(in.y);
        double cells = 0.0;
        for (std::size_t c = 0; c < part.size(); ++c) cells += f(xs[c], ys[c], in.p, part.cells()[c]);
        // superadditivity: sum over cells <= value at the root
        return inequality(cells, f(in.x, in.y, in.p, in.q));
      },
      [](SuperadditivityInstance& in) { return std::vector<PointCloud*>{&in.x, &in.y}; },
      [](const SuperadditivityInstance& in) {
        return nlohmann::json{{"box", to_json(in.q)},
                              {"p", in.p},
                              {"level", in.level},
                              {"clouds", named_clouds({{"x", &in.x}, {"y", &in.y}})}};
      },
  };
  return run_check(instances, spec, opt);
}

}  // namespace bipfunc
