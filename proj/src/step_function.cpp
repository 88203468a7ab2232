#include "dyadic/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dyadic/errors.hpp"
#include "dyadic/numeric.hpp"

namespace dyadic {

namespace {

constexpr double kDomainSlack = 1e-12;

// Accept t marginally past the right end of the domain (accumulated rounding
// in breakpoints) and pin it to the end.
double clamp_to_domain(const StepFunction& g, double t, const char* who) {
  double total = g.total_length();
  if (!(t > 0.0) || t > total * (1.0 + kDomainSlack)) {
    throw DomainError(std::string(who) + ": t must lie in (0, total length]");
  }
  return std::min(t, total);
}

}  // namespace

StepFunction::StepFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  detail::require(!pieces_.empty(), "StepFunction: needs at least one piece");
  ends_.reserve(pieces_.size());
  cumulative_.reserve(pieces_.size());
  CompensatedSum length_sum;
  CompensatedSum integral_sum;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    detail::require(std::isfinite(p.length) && p.length > 0.0,
                    "StepFunction: piece lengths must be positive");
    detail::require(std::isfinite(p.value) && p.value >= 0.0,
                    "StepFunction: piece values must be finite and >= 0");
    detail::require(i == 0 || p.value <= pieces_[i - 1].value,
                    "StepFunction: values must be non-increasing");
    length_sum.add(p.length);
    integral_sum.add(p.length * p.value);
    ends_.push_back(length_sum.value());
    cumulative_.push_back(integral_sum.value());
  }
}

StepFunction StepFunction::constant(double value, double length) {
  return StepFunction({Piece{length, value}});
}

bool StepFunction::is_normalized(double tol) const { return std::abs(total_length() - 1.0) <= tol; }

std::size_t StepFunction::piece_index(double t) const {
  auto it = std::lower_bound(ends_.begin(), ends_.end(), t);
  if (it == ends_.end()) return pieces_.size() - 1;
  return static_cast<std::size_t>(it - ends_.begin());
}

double StepFunction::integral_to(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= total_length()) return integral();
  std::size_t i = piece_index(t);
  return integral_before(i) + pieces_[i].value * (t - start(i));
}

std::vector<Piece> StepFunction::slice(double lo, double hi) const {
  std::vector<Piece> out;
  if (!(hi > lo)) return out;
  std::size_t first = lo <= 0.0 ? 0 : piece_index(lo);
  for (std::size_t i = first; i < pieces_.size(); ++i) {
    double a = std::max(lo, start(i));
    double b = std::min(hi, end(i));
    if (b > a) out.push_back(Piece{b - a, pieces_[i].value});
    if (end(i) >= hi) break;
  }
  return out;
}

StepFunction decreasing_rearrangement(std::span<const double> measures,
                                      std::span<const double> values) {
  detail::require(measures.size() == values.size(),
                  "decreasing_rearrangement: measures and values differ in length");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<Piece> pieces;
  pieces.reserve(order.size());
  for (std::size_t i : order) pieces.push_back(Piece{measures[i], values[i]});
  return StepFunction(std::move(pieces));
}

StepFunction decreasing_rearrangement(const AtomFunction& phi) {
  const ProbTree& tree = phi.tree();
  std::vector<double> measures(tree.leaf_count());
  for (std::size_t i = 0; i < measures.size(); ++i) measures[i] = tree.leaf_measure(i);
  return decreasing_rearrangement(measures, phi.values());
}

double hardy_average(const StepFunction& g, double t) {
  t = clamp_to_domain(g, t, "hardy_average");
  return g.integral_to(t) / t;
}

double step_power_integral(const StepFunction& g, double q, double t) {
  detail::require(q >= 1.0 || q == 0.0, "step_power_integral: exponent must be >= 1");
  t = clamp_to_domain(g, t, "step_power_integral");
  CompensatedSum sum;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double covered = std::min(t, g.end(i)) - g.start(i);
    if (covered <= 0.0) break;
    sum.add(covered * pow_fast(g.piece(i).value, q));
    if (g.end(i) >= t) break;
  }
  return sum.value();
}

double beta_lambda(const StepFunction& g, double lambda) {
  const double mean = g.integral() / g.total_length();
  if (!(lambda > mean)) {
    throw DomainError("beta_lambda: level above average required (lambda must exceed the mean of g)");
  }
  if (lambda > g.max_value()) return kEmptyLevel;

  // The Hardy average at the breakpoints is non-increasing; find the last
  // breakpoint where it is still >= lambda.
  const std::size_t n = g.size();
  std::size_t lo = 0, hi = n;  // invariant: avg(end(i)) >= lambda for i < lo
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (g.cumulative_integral(mid) / g.end(mid) >= lambda) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo >= n) return g.total_length();
  // On piece lo the average is (A + v (t - T)) / t, which crosses lambda once.
  const std::size_t i = lo;
  const double v = g.piece(i).value;
  // With v >= lambda the average cannot drop below lambda on this piece; only
  // rounding in the breakpoint averages lands here.
  if (v >= lambda) return g.end(i);
  const double t = (g.integral_before(i) - v * g.start(i)) / (lambda - v);
  return std::clamp(t, g.start(i), g.end(i));
}

double pieced_product_integral(const StepFunction& a, const StepFunction& b, double k) {
  double limit = std::min(a.total_length(), b.total_length());
  detail::require(k > 0.0 && k <= limit * (1.0 + kDomainSlack),
                  "pieced_product_integral: k outside the common domain");
  k = std::min(k, limit);
  CompensatedSum sum;
  std::size_t i = 0, j = 0;
  double pos = 0.0;
  while (pos < k && i < a.size() && j < b.size()) {
    double next = std::min({a.end(i), b.end(j), k});
    if (next > pos) sum.add((next - pos) * a.piece(i).value * b.piece(j).value);
    pos = next;
    if (a.end(i) <= pos) ++i;
    if (b.end(j) <= pos) ++j;
  }
  return sum.value();
}

}  // namespace dyadic
