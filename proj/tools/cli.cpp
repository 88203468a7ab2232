#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dyadic/bellman.hpp"
#include "dyadic/csv.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/extremal.hpp"
#include "dyadic/extremizer.hpp"
#include "dyadic/functional.hpp"
#include "dyadic/maximal.hpp"
#include "dyadic/parallel.hpp"
#include "dyadic/symmetrize.hpp"

namespace dyadic::cli {

namespace {

using Record = nlohmann::ordered_json;

// Default tolerances per subcommand.
constexpr double kOmegaTol = 1e-12;
constexpr double kBellmanTol = 1e-12;
constexpr double kExtremalTol = 1e-9;
constexpr double kLemmaTol = 1e-8;
constexpr double kWeakTypeTol = 1e-12;
constexpr double kDoobTol = 1e-12;
constexpr double kBruteForceTol = 1e-10;
constexpr double kSweepTol = 1e-12;
constexpr double kSharpnessTol = 1e-9;

class Emitter {
 public:
  Emitter(std::ostream& out, OutputFormat format) : out_(out), format_(format) {}

  void emit(const Record& record) {
    if (!record.value("pass", false)) all_passed_ = false;
    if (format_ == OutputFormat::JsonLines) {
      out_ << record.dump() << '\n';
      return;
    }
    if (!header_written_) {
      bool first = true;
      for (auto it = record.begin(); it != record.end(); ++it) {
        out_ << (first ? "" : ",") << it.key();
        first = false;
      }
      out_ << '\n';
      header_written_ = true;
    }
    bool first = true;
    for (const auto& cell : record) {
      out_ << (first ? "" : ",") << csv_cell(cell);
      first = false;
    }
    out_ << '\n';
  }

  bool all_passed() const { return all_passed_; }

 private:
  static std::string csv_cell(const Record& cell) {
    if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
    if (cell.is_string()) return cell.get<std::string>();
    if (cell.is_array()) {
      std::string joined;
      for (const auto& x : cell) joined += (joined.empty() ? "" : ";") + x.dump();
      return joined;
    }
    return cell.dump();
  }

  std::ostream& out_;
  OutputFormat format_;
  bool header_written_ = false;
  bool all_passed_ = true;
};

double need(const std::optional<double>& value, const char* flag) {
  if (!value) detail::fail_precondition(std::string("missing required option --") + flag);
  return *value;
}

double tolerance_or(const CommandConfig& c, double fallback) {
  double tol = c.tolerance.value_or(fallback);
  detail::require(tol >= 0.0, "tolerance must be >= 0");
  return tol;
}

double relative(double err, double scale) { return std::abs(err) / std::max(1.0, std::abs(scale)); }

StepFunction standard_two_step() { return StepFunction({{0.5, 2.0}, {0.5, 1.0}}); }

// Atom functions to check: one from --phi on a uniform tree, or a fuzzed batch.
std::vector<TreeInstance> tree_instances(const CommandConfig& c) {
  if (!c.phi_path.empty()) {
    detail::require(c.depth.has_value(), "--phi needs --depth (and optionally --arity)");
    auto tree = std::make_shared<const ProbTree>(ProbTree::uniform(c.arity.value_or(2), *c.depth));
    AtomFunction phi = csv::read_atom_function(c.phi_path, tree);
    return {TreeInstance{tree, std::move(phi)}};
  }
  return fuzz_tree_instances(c.seed, c.count.value_or(100));
}

int cmd_omega(const CommandConfig& c, Emitter& emit) {
  const double p = need(c.p, "p");
  const double b = need(c.b, "b");
  const double tol = tolerance_or(c, kOmegaTol);
  const double value = omega(p, b);
  const double residual = std::abs(hp(p, value) - b);
  Record r;
  r["command"] = "omega";
  r["p"] = p;
  r["b"] = b;
  r["value"] = value;
  r["residual"] = residual;
  r["tolerance"] = tol;
  r["pass"] = residual <= tol;
  emit.emit(r);
  return 0;
}

int cmd_bellman(const CommandConfig& c, Emitter& emit) {
  const double p = need(c.p, "p");
  const double f = need(c.f, "f");
  const double F = need(c.F, "F");
  const double tol = tolerance_or(c, kBellmanTol);
  const double q = p / (p - 1.0);
  Record r;
  r["command"] = "bellman";
  r["p"] = p;
  r["f"] = f;
  r["F"] = F;
  double value = 0.0, lower = 0.0, upper = 0.0;
  if (c.L) {
    BellmanPoint point(p, f, F, *c.L);
    value = point.value();
    r["L"] = *c.L;
    r["L0"] = point.L0();
    r["branch"] = point.below_threshold() ? "below_threshold" : "at_or_above_threshold";
    if (point.below_threshold()) r["b"] = point.b();
    // max(M phi, L) dominates both phi and L, and is at most M phi + L.
    lower = std::max(F, std::pow(*c.L, p));
    upper = std::pow(*c.L, p) + std::pow(q, p) * F;
  } else {
    value = bellman2(p, f, F);
    lower = F;
    upper = std::pow(q, p) * F;
  }
  r["value"] = value;
  r["tolerance"] = tol;
  r["pass"] = value >= lower * (1.0 - tol) && value <= upper * (1.0 + tol);
  emit.emit(r);
  return 0;
}

int cmd_extremal_g(const CommandConfig& c, Emitter& emit) {
  const double p = need(c.p, "p");
  const double f = need(c.f, "f");
  const double F = need(c.F, "F");
  const double L = need(c.L, "L");
  const double tol = tolerance_or(c, kExtremalTol);
  PowerLawExtremal ex = solve_extremal_g(p, f, F, L);
  const VuValues vu = ex.vu(L);
  const double target = bellman3(p, f, F, L);
  const double gamma_gap = relative(ex.gamma_from_mean() - ex.gamma_from_moment(), ex.gamma());
  const double residual = relative(vu.v - target, target);
  Record r;
  r["command"] = "extremal-g";
  r["p"] = p;
  r["f"] = f;
  r["F"] = F;
  r["L"] = L;
  r["b"] = ex.b();
  r["c"] = ex.c();
  r["gamma"] = ex.gamma();
  r["K"] = ex.K();
  r["gamma_from_mean"] = ex.gamma_from_mean();
  r["gamma_from_moment"] = ex.gamma_from_moment();
  r["v_g"] = vu.v;
  r["bellman3"] = target;
  r["residual"] = residual;
  if (!c.write_g.empty()) {
    StepFunction g = ex.discretize();
    std::ofstream file(c.write_g);
    detail::require(file.good(), "cannot open '" + c.write_g + "' for writing");
    csv::write_step_function(file, g);
    r["pieces_written"] = g.size();
  }
  r["tolerance"] = tol;
  r["pass"] = residual <= tol && gamma_gap <= tol;
  emit.emit(r);
  return 0;
}

int cmd_verify_lemma41(const CommandConfig& c, Emitter& emit) {
  const double tol = tolerance_or(c, kLemmaTol);
  std::vector<StepFunction> gs;
  if (!c.g_path.empty()) {
    gs.push_back(csv::read_step_function(c.g_path));
  } else {
    gs = fuzz_step_functions(c.seed, c.count.value_or(100));
  }
  std::vector<double> ps = c.p_values;
  if (c.p) ps = {*c.p};
  if (ps.empty()) ps = {1.5, 2.0, 3.0};
  for (double p : ps) detail::require(p > 1.0, "verify-lemma41: p must be > 1");

  std::vector<double> factors = c.L_factors;
  std::vector<double> levels = c.L_values;
  if (c.L) levels = {*c.L};
  if (levels.empty() && factors.empty()) factors = {1.0, 1.5, 3.0};
  for (double x : factors) detail::require(x >= 1.0, "verify-lemma41: L factors must be >= 1");

  struct Job {
    std::size_t index;
    double p, L;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const double f = gs[i].integral();
    for (double p : ps) {
      for (double L : levels) {
        detail::require(L >= f * (1.0 - 1e-12),
                        "verify-lemma41: L must be >= f = " + std::to_string(f));
        jobs.push_back({i, p, L});
      }
      for (double x : factors) jobs.push_back({i, p, x * f});
    }
  }
  auto records = parallel_map(jobs.size(), c.jobs, [&](std::size_t j) {
    const Job& job = jobs[j];
    const StepFunction& g = gs[job.index];
    const double f = g.integral();
    VuValues vu = vu_functionals(g, job.p, job.L);
    const double residual = relative(lemma41_residual(job.p, f, job.L, vu), vu.v);
    Record r;
    r["command"] = "verify-lemma41";
    r["instance"] = job.index;
    r["p"] = job.p;
    r["L"] = job.L;
    r["f"] = f;
    r["v"] = vu.v;
    r["u"] = vu.u;
    r["residual"] = residual;
    r["tolerance"] = tol;
    r["pass"] = residual <= tol;
    return r;
  });
  for (const auto& r : records) emit.emit(r);
  return 0;
}

// Levels at which the strict and non-strict level sets change, with points
// between and beyond them.
std::vector<double> weak_type_levels(const std::vector<double>& maximal) {
  std::set<double> distinct(maximal.begin(), maximal.end());
  std::vector<double> sorted(distinct.begin(), distinct.end());
  std::vector<double> levels;
  levels.push_back(sorted.front() / 2.0);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    levels.push_back(sorted[i]);
    if (i + 1 < sorted.size()) levels.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  }
  levels.push_back(sorted.back() * 2.0);
  return levels;
}

int cmd_verify_weaktype(const CommandConfig& c, Emitter& emit) {
  const double tol = tolerance_or(c, kWeakTypeTol);
  auto instances = tree_instances(c);
  auto records = parallel_map(instances.size(), c.jobs, [&](std::size_t i) {
    const auto& inst = instances[i];
    MaximalResult maximal = maximal_operator(*inst.tree, inst.phi);
    auto levels = weak_type_levels(maximal.value);
    double worst = INFINITY;
    bool ok = true;
    for (double lambda : levels) {
      for (LevelSet kind : {LevelSet::Strict, LevelSet::NonStrict}) {
        WeakTypeReport rep = weak_type_report(inst.phi, maximal, lambda, kind);
        const double margin = rep.bound - rep.level_measure;
        worst = std::min(worst, margin / std::max(1.0, rep.bound));
        ok = ok && margin >= -tol * std::max(1.0, rep.bound);
      }
    }
    Record r;
    r["command"] = "verify-weaktype";
    r["instance"] = i;
    r["leaves"] = inst.tree->leaf_count();
    r["levels_checked"] = 2 * levels.size();
    r["worst_margin"] = worst;
    r["tolerance"] = tol;
    r["pass"] = ok;
    return r;
  });
  for (const auto& r : records) emit.emit(r);
  return 0;
}

int cmd_verify_doob_extremal(const CommandConfig& c, Emitter& emit) {
  const double p = need(c.p, "p");
  const double f = need(c.f, "f");
  const double F = need(c.F, "F");
  const double L = c.L.value_or(f);
  const double a = c.a.value_or(0.5);
  const std::size_t truncation = c.depth.value_or(12);
  const double tail = c.tail_tolerance.value_or(kDefaultTailTolerance);
  const double tol = tolerance_or(c, kDoobTol);
  PowerLawExtremal ex = solve_extremal_g(p, f, F, L);
  StepFunction g = ex.discretize();
  Extremizer built = build_extremizer(g, a, truncation, tail);
  const double ratio = doob_ratio(*built.structure.tree, built.phi, p);
  Record r;
  r["command"] = "verify-doob";
  r["source"] = "extremal";
  r["p"] = p;
  r["f"] = f;
  r["F"] = F;
  r["L"] = L;
  r["a"] = a;
  r["truncation"] = truncation;
  r["leaves"] = built.structure.tree->leaf_count();
  r["ratio"] = ratio;
  if (c.min_ratio) r["min_ratio"] = *c.min_ratio;
  r["tolerance"] = tol;
  r["pass"] = ratio <= 1.0 + tol && (!c.min_ratio || ratio >= *c.min_ratio);
  emit.emit(r);
  return 0;
}

int cmd_verify_doob(const CommandConfig& c, Emitter& emit) {
  if (c.extremal) return cmd_verify_doob_extremal(c, emit);
  const double tol = tolerance_or(c, kDoobTol);
  std::vector<double> ps = c.p_values;
  if (c.p) ps = {*c.p};
  if (ps.empty()) ps = {1.5, 2.0, 3.0};
  for (double p : ps) detail::require(p > 1.0, "verify-doob: p must be > 1");
  auto instances = tree_instances(c);
  auto records = parallel_map(instances.size(), c.jobs, [&](std::size_t i) {
    const auto& inst = instances[i];
    MaximalResult maximal = maximal_operator(*inst.tree, inst.phi);
    std::vector<Record> out;
    for (double p : ps) {
      const double ratio = doob_ratio(inst.phi, maximal, p);
      Record r;
      r["command"] = "verify-doob";
      r["source"] = "fuzz";
      r["instance"] = i;
      r["p"] = p;
      r["ratio"] = ratio;
      if (c.min_ratio) r["min_ratio"] = *c.min_ratio;
      r["tolerance"] = tol;
      r["pass"] = ratio <= 1.0 + tol && (!c.min_ratio || ratio >= *c.min_ratio);
      out.push_back(std::move(r));
    }
    return out;
  });
  for (const auto& batch : records)
    for (const auto& r : batch) emit.emit(r);
  return 0;
}

FunctionalSpec composed_spec(const CommandConfig& c) {
  return FunctionalSpec::composed(parse_monotone(c.outer), parse_monotone(c.inner));
}

int cmd_bruteforce(const CommandConfig& c, Emitter& emit) {
  const double tol = tolerance_or(c, kBruteForceTol);
  const double k = c.k.value_or(1.0);
  const FunctionalSpec spec = composed_spec(c);
  const ProbTree tree = ProbTree::uniform(c.arity.value_or(2), c.depth.value_or(3));
  const std::size_t n = tree.leaf_count();
  if (n > kBruteForceMaxAtoms) {
    detail::fail_precondition("bruteforce: " + std::to_string(n) + " atoms exceeds the limit of " +
                              std::to_string(kBruteForceMaxAtoms) +
                              "; use extremizer-sweep for larger instances");
  }
  std::vector<StepFunction> gs;
  if (!c.g_path.empty()) {
    gs.push_back(csv::read_step_function(c.g_path));
  } else {
    FuzzCorpus corpus(c.seed);
    const std::size_t count = c.count.value_or(10);
    detail::require(count >= 1, "bruteforce: count must be >= 1");
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> values(n);
      for (double& v : values) v = corpus.log_uniform(1e-3, 1e3);
      std::sort(values.begin(), values.end(), std::greater<>());
      std::vector<Piece> pieces;
      for (double v : values) pieces.push_back({1.0 / static_cast<double>(n), v});
      gs.emplace_back(std::move(pieces));
    }
  }
  for (std::size_t i = 0; i < gs.size(); ++i) {
    BruteForceResult best = brute_force_sup(gs[i], tree, spec, k, c.jobs);
    const double rhs = rhs_integral(gs[i], spec, k);
    Record r;
    r["command"] = "bruteforce";
    r["instance"] = i;
    r["atoms"] = n;
    r["functional"] = spec.describe();
    r["k"] = k;
    r["value"] = best.value;
    r["rhs"] = rhs;
    r["evaluated"] = best.evaluated;
    r["assignment"] = best.assignment;
    r["tolerance"] = tol;
    r["pass"] = best.value <= rhs * (1.0 + tol);
    emit.emit(r);
  }
  return 0;
}

int cmd_extremizer_sweep(const CommandConfig& c, Emitter& emit) {
  const double tol = tolerance_or(c, kSweepTol);
  const StepFunction g = c.g_path.empty() ? standard_two_step() : csv::read_step_function(c.g_path);
  const FunctionalSpec spec = composed_spec(c);
  std::vector<double> as = c.a_values;
  if (c.a) as = {*c.a};
  if (as.empty()) as = {0.2, 0.1, 0.05, 0.01};
  for (double a : as) detail::require(a > 0.0 && a < 1.0, "extremizer-sweep: a must lie in (0, 1)");
  // Coarse to fine, independent of the order given.
  std::sort(as.begin(), as.end(), std::greater<>());
  const double tail = c.tail_tolerance.value_or(kDefaultTailTolerance);
  auto rows = parallel_map(as.size(), c.jobs, [&](std::size_t i) {
    return extremizer_sweep(g, spec, {as[i]}, tail).front();
  });
  for (const auto& row : rows) {
    Record r;
    r["a"] = row.a;
    r["M_trunc"] = row.truncation;
    r["lower_bound"] = row.lower_bound;
    r["rhs"] = row.rhs;
    r["rel_gap"] = row.rel_gap;
    r["tolerance"] = tol;
    r["pass"] = row.lower_bound <= row.rhs * (1.0 + tol);
    emit.emit(r);
  }
  return 0;
}

int cmd_sharpness(const CommandConfig& c, Emitter& emit) {
  const double p = need(c.p, "p");
  const double f = need(c.f, "f");
  const double F = need(c.F, "F");
  const double L = need(c.L, "L");
  const double tol = tolerance_or(c, kSharpnessTol);
  SharpnessSequence seq = sharpness_sequence(p, f, F, L, c.n.value_or(20));
  for (const auto& t : seq.terms) {
    Record r;
    r["n"] = t.n;
    r["L_n"] = t.L_n;
    r["b_n"] = t.b_n;
    r["c_n"] = t.c_n;
    r["gamma_n"] = t.gamma_n;
    r["v_gn"] = t.v;
    r["target"] = seq.target;
    r["rel_gap"] = t.rel_gap;
    r["tolerance"] = tol;
    r["pass"] = t.v <= seq.target * (1.0 + tol) && t.v >= t.v_lower - tol * seq.target;
    emit.emit(r);
  }
  return 0;
}

using Handler = std::function<int(const CommandConfig&, Emitter&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"omega", cmd_omega},
      {"bellman", cmd_bellman},
      {"extremal-g", cmd_extremal_g},
      {"verify-lemma41", cmd_verify_lemma41},
      {"verify-weaktype", cmd_verify_weaktype},
      {"verify-doob", cmd_verify_doob},
      {"bruteforce", cmd_bruteforce},
      {"extremizer-sweep", cmd_extremizer_sweep},
      {"sharpness", cmd_sharpness},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, handler] : handlers()) out.push_back(name);
    return out;
  }();
  return names;
}

int run(const CommandConfig& config, std::ostream& out, std::ostream& err) {
  auto it = handlers().find(config.subcommand);
  if (it == handlers().end()) {
    err << "error: unknown subcommand '" << config.subcommand << "'\n";
    return kExitUsage;
  }
  Emitter emitter(out, config.format);
  try {
    it->second(config, emitter);
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::invalid_argument& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitUsage;
  }
  out.flush();
  return emitter.all_passed() ? kExitOk : kExitViolation;
}

}  // namespace dyadic::cli
