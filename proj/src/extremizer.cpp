#include "dyadic/extremizer.hpp"

#include <algorithm>
#include <cmath>

#include "dyadic/errors.hpp"
#include "dyadic/maximal.hpp"
#include "dyadic/numeric.hpp"
#include "dyadic/symmetrize.hpp"

namespace dyadic {

namespace {

constexpr double kSelfCheckTol = 1e-9;
constexpr std::size_t kMaxLevels = 2'000'000;

void require_parameter(double a) {
  detail::require(a > 0.0 && a < 1.0, "extremizer: a must lie in (0, 1)");
}

StepFunction normalized(const StepFunction& g) {
  detail::require(g.is_normalized(1e-9), "extremizer: g must live on (0, 1]");
  if (g.total_length() == 1.0) return g;
  std::vector<Piece> pieces(g.pieces().begin(), g.pieces().end());
  const double scale = 1.0 / g.total_length();
  for (Piece& p : pieces) p.length *= scale;
  return StepFunction(std::move(pieces));
}

std::vector<double> level_ends(double a, std::size_t truncation) {
  std::vector<double> s(truncation + 1);
  s[0] = 1.0;
  for (std::size_t m = 0; m < truncation; ++m) s[m + 1] = s[m] * (1.0 - a);
  return s;
}

void require_tail(const StepFunction& g, double tail_end, double tail_tolerance) {
  detail::require(tail_tolerance > 0.0, "extremizer: tail tolerance must be > 0");
  if (!(g.integral_to(tail_end) < tail_tolerance * g.integral())) {
    detail::fail_precondition(
        "extremizer: truncation too small, the tail keeps at least tail_tolerance * f of g's "
        "integral; raise the truncation or the tolerance");
  }
}

double chunk_average(const StepFunction& g, double lo, double hi) {
  return (g.integral_to(hi) - g.integral_to(lo)) / (hi - lo);
}

double inner_mass(const StepFunction& g, const MonotoneFn& inner, double lo, double hi) {
  CompensatedSum sum;
  for (const Piece& p : g.slice(lo, hi)) sum.add(p.length * evaluate(inner, p.value));
  return sum.value();
}

// Give `node` (of measure `measure`) the values of g on (lo, hi]: a leaf when
// g is constant there, otherwise one child per piece.
void attach_chunk(TreeBuilder& builder, NodeId node, double measure, const StepFunction& g,
                  double lo, double hi, std::vector<std::pair<NodeId, double>>& leaf_values) {
  std::vector<Piece> chunk = g.slice(lo, hi);
  if (chunk.size() <= 1) {
    double value = chunk.empty() ? g.value_at(hi) : chunk.front().value;
    leaf_values.emplace_back(node, value);
    return;
  }
  std::vector<double> lengths;
  CompensatedSum head;
  for (std::size_t i = 0; i + 1 < chunk.size(); ++i) {
    lengths.push_back(chunk[i].length);
    head.add(chunk[i].length);
  }
  // Close the chunk exactly on the node's measure.
  double last = measure - head.value();
  lengths.push_back(last > 0.0 ? last : chunk.back().length);
  auto kids = builder.split(node, lengths);
  for (std::size_t i = 0; i < kids.size(); ++i) leaf_values.emplace_back(kids[i], chunk[i].value);
}

double l1_distance(const StepFunction& x, const StepFunction& y) {
  CompensatedSum sum;
  std::size_t i = 0, j = 0;
  double pos = 0.0;
  const double end = std::min(x.total_length(), y.total_length());
  while (pos < end && i < x.size() && j < y.size()) {
    double next = std::min({x.end(i), y.end(j), end});
    if (next > pos) sum.add((next - pos) * std::abs(x.piece(i).value - y.piece(j).value));
    pos = next;
    if (x.end(i) <= pos) ++i;
    if (y.end(j) <= pos) ++j;
  }
  return sum.value();
}

double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

double ExtremizerCheck::worst() const {
  return std::max({rearrangement_l1, chain_average, remainder_average});
}

std::size_t minimal_truncation(const StepFunction& g_in, double a, double tail_tolerance) {
  require_parameter(a);
  detail::require(tail_tolerance > 0.0, "extremizer: tail tolerance must be > 0");
  const StepFunction g = normalized(g_in);
  const double limit = tail_tolerance * g.integral();
  double s = 1.0;
  for (std::size_t m = 1; m <= kMaxLevels; ++m) {
    s *= 1.0 - a;
    if (g.integral_to(s) < limit) return m;
  }
  detail::fail_precondition("extremizer: tail tolerance unreachable within the level limit");
}

Extremizer build_extremizer(const StepFunction& g_in, double a, std::size_t truncation,
                            double tail_tolerance) {
  require_parameter(a);
  detail::require(truncation >= 1, "extremizer: truncation must be >= 1");
  detail::require(truncation <= kMaxLevels, "extremizer: truncation too large");
  const StepFunction g = normalized(g_in);
  const auto s = level_ends(a, truncation);
  require_tail(g, s[truncation], tail_tolerance);

  TreeBuilder builder;
  ExtremizerTree structure;
  structure.a = a;
  std::vector<std::pair<NodeId, double>> leaf_values;
  NodeId chain = builder.root();
  for (std::size_t m = 0; m < truncation; ++m) {
    double remainder_measure = s[m] - s[m + 1];
    auto kids = builder.split(chain, {s[m + 1], remainder_measure});
    ExtremizerLevel level;
    level.chain_node = chain;
    level.remainder_node = kids[1];
    level.outer_end = s[m];
    level.inner_end = s[m + 1];
    level.chain_average = hardy_average(g, s[m]);
    level.remainder_average = chunk_average(g, s[m + 1], s[m]);
    structure.levels.push_back(level);
    attach_chunk(builder, kids[1], remainder_measure, g, s[m + 1], s[m], leaf_values);
    chain = kids[0];
  }
  structure.tail_node = chain;
  structure.tail_end = s[truncation];
  structure.tail_average = hardy_average(g, s[truncation]);
  attach_chunk(builder, chain, s[truncation], g, 0.0, s[truncation], leaf_values);

  auto tree = std::make_shared<const ProbTree>(std::move(builder).build());
  std::vector<double> values(tree->leaf_count(), 0.0);
  for (auto [node, value] : leaf_values) values[tree->leaf_index(node)] = value;
  structure.tree = tree;

  Extremizer ex{std::move(structure), AtomFunction(tree, std::move(values))};
  ExtremizerCheck check = check_extremizer(ex, g);
  if (!(check.worst() <= kSelfCheckTol)) {
    throw InvariantViolation("build_extremizer: self-check failed (worst relative error " +
                             std::to_string(check.worst()) + ")");
  }
  return ex;
}

ExtremizerCheck check_extremizer(const Extremizer& ex, const StepFunction& g) {
  ExtremizerCheck check;
  const double f = g.integral();
  check.rearrangement_l1 = l1_distance(decreasing_rearrangement(ex.phi), g) / f;
  const auto averages = node_averages(*ex.structure.tree, ex.phi);
  for (const auto& level : ex.structure.levels) {
    check.chain_average = std::max(check.chain_average,
                                   relative_error(averages[level.chain_node], level.chain_average));
    check.remainder_average =
        std::max(check.remainder_average,
                 relative_error(averages[level.remainder_node], level.remainder_average));
  }
  check.chain_average =
      std::max(check.chain_average,
               relative_error(averages[ex.structure.tail_node], ex.structure.tail_average));
  return check;
}

double extremizer_lower_bound(const StepFunction& g_in, double a, std::size_t truncation,
                              const FunctionalSpec& spec, double tail_tolerance) {
  require_parameter(a);
  detail::require(truncation >= 1, "extremizer: truncation must be >= 1");
  detail::require(!spec.is_weighted(), "extremizer_lower_bound: needs a composed spec");
  const StepFunction g = normalized(g_in);
  const auto s = level_ends(a, truncation);
  require_tail(g, s[truncation], tail_tolerance);

  CompensatedSum sum;
  for (std::size_t m = 0; m < truncation; ++m) {
    double theta = hardy_average(g, s[m]);
    sum.add(spec.outer_at(theta) * inner_mass(g, spec.inner(), s[m + 1], s[m]));
  }
  // theta_m grows with m for non-increasing g, so theta_M underestimates the
  // maximal function on the whole tail.
  double tail_theta = hardy_average(g, s[truncation]);
  sum.add(spec.outer_at(tail_theta) * inner_mass(g, spec.inner(), 0.0, s[truncation]));
  return sum.value();
}

std::vector<ExtremizerSweepRow> extremizer_sweep(const StepFunction& g, const FunctionalSpec& spec,
                                                 const std::vector<double>& a_values,
                                                 double tail_tolerance) {
  const double rhs = rhs_integral(g, spec, 1.0);
  std::vector<ExtremizerSweepRow> rows;
  for (double a : a_values) {
    ExtremizerSweepRow row;
    row.a = a;
    row.truncation = minimal_truncation(g, a, tail_tolerance);
    row.lower_bound = extremizer_lower_bound(g, a, row.truncation, spec, tail_tolerance);
    row.rhs = rhs;
    row.rel_gap = (rhs - row.lower_bound) / rhs;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dyadic
