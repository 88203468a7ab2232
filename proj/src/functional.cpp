#include "dyadic/functional.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "dyadic/errors.hpp"
#include "dyadic/numeric.hpp"

namespace dyadic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kQuadratureRelTol = 1e-13;
constexpr unsigned kQuadratureMaxDepth = 8;
constexpr int kMaxClosedFormPower = 64;

bool is_small_integer(double q) {
  return q >= 0.0 && q <= kMaxClosedFormPower && q == std::floor(q);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Integral over [a, b] of (v + C/t)^q for a nonnegative integer q, a > 0.
// Expands the binomial; every term is nonnegative, so there is no
// cancellation between terms.
double power_of_average_closed(int q, double v, double C, double a, double b) {
  const double width = b - a;
  const double log_ratio = std::log1p(width / a);  // ln(b/a)
  const double ratio = C / a;
  CompensatedSum sum;
  double ratio_pow = 1.0;  // (C/a)^(j-1) for j >= 1
  for (int j = 0; j <= q; ++j) {
    double coeff = binomial(q, j) * std::pow(v, q - j);
    double term;
    if (j == 0) {
      term = width;
    } else if (j == 1) {
      term = C * log_ratio;
    } else {
      ratio_pow *= ratio;
      // C^j (a^(1-j) - b^(1-j)) / (j-1) = C (C/a)^(j-1) (1 - (a/b)^(j-1)) / (j-1)
      term = C * ratio_pow * -std::expm1(-(j - 1) * log_ratio) / (j - 1);
    }
    sum.add(coeff * term);
  }
  return sum.value();
}

double power_of_average(double q, double v, double C, double a, double b) {
  if (!(b > a)) return 0.0;
  if (C <= 0.0) return std::pow(v, q) * (b - a);
  if (is_small_integer(q)) return power_of_average_closed(static_cast<int>(q), v, C, a, b);
  // With t = e^u the integrand (v e^u + C)^q e^{(1-q) u} is smooth on a log
  // scale, so unit-width chunks in u converge in a few Kronrod rounds even
  // when [a, b] spans many decades.
  auto integrand = [&](double u) {
    const double t = std::exp(u);
    return std::pow(v * t + C, q) * std::exp((1.0 - q) * u);
  };
  const double lo = std::log(a), hi = std::log(b);
  const int chunks = std::max(1, static_cast<int>(std::ceil(hi - lo)));
  CompensatedSum sum;
  for (int i = 0; i < chunks; ++i) {
    const double u0 = lo + (hi - lo) * i / chunks;
    const double u1 = i + 1 == chunks ? hi : lo + (hi - lo) * (i + 1) / chunks;
    double error = 0.0;
    sum.add(boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, u0, u1, kQuadratureMaxDepth, kQuadratureRelTol, &error));
  }
  return sum.value();
}

// Integral over [a, b] of outer(v + C/t); the Hardy average on one piece of g.
double outer_of_average(const MonotoneFn& outer, double v, double C, double a, double b) {
  if (!(b > a)) return 0.0;
  C = std::max(C, 0.0);
  return std::visit(
      overloaded{
          [&](const ConstantFn& fn) { return fn.c * (b - a); },
          [&](const IdentityFn&) { return power_of_average(1.0, v, C, a, b); },
          [&](const PowerFn& fn) { return power_of_average(fn.q, v, C, a, b); },
          [&](const PowerOfMaxFn& fn) {
            if (C == 0.0 || v >= fn.L) {
              if (C == 0.0 && v < fn.L) return std::pow(fn.L, fn.q) * (b - a);
              return power_of_average(fn.q, v, C, a, b);
            }
            // v + C/t >= L exactly for t <= C / (L - v).
            double cross = std::clamp(C / (fn.L - v), a, b);
            return power_of_average(fn.q, v, C, a, cross) + std::pow(fn.L, fn.q) * (b - cross);
          },
      },
      outer);
}

// Walk the segments of (0, k] on which g (and the optional weight) are
// constant, calling visit(a, b, v, C, w) where the Hardy average is v + C/t.
template <class WeightAt, class Visit>
void for_each_segment(const StepFunction& g, const StepFunction* weight, double k,
                      WeightAt weight_at, Visit visit) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double lo = g.start(i);
    if (lo >= k) break;
    double hi = std::min(g.end(i), k);
    double v = g.piece(i).value;
    double C = g.integral_before(i) - v * lo;
    if (weight == nullptr) {
      visit(lo, hi, v, C, weight_at(v, 0.0));
      continue;
    }
    double pos = lo;
    while (pos < hi && j < weight->size()) {
      double next = std::min(hi, weight->end(j));
      if (next > pos) visit(pos, next, v, C, weight->piece(j).value);
      pos = next;
      if (weight->end(j) <= pos) ++j;
    }
  }
}

double checked_k(const StepFunction& g, double k, const char* who) {
  if (!(k > 0.0) || k > g.total_length() * (1.0 + 1e-12)) {
    throw DomainError(std::string(who) + ": k must lie in (0, total length]");
  }
  return std::min(k, g.total_length());
}

}  // namespace

double evaluate(const MonotoneFn& fn, double t) {
  return std::visit(overloaded{
                        [&](const ConstantFn& f) { return f.c; },
                        [&](const IdentityFn&) { return t; },
                        [&](const PowerFn& f) { return pow_fast(t, f.q); },
                        [&](const PowerOfMaxFn& f) { return pow_fast(std::max(t, f.L), f.q); },
                    },
                    fn);
}

void validate(const MonotoneFn& fn) {
  std::visit(overloaded{
                 [](const ConstantFn& f) {
                   detail::require(std::isfinite(f.c) && f.c >= 0.0, "const: c must be >= 0");
                 },
                 [](const IdentityFn&) {},
                 [](const PowerFn& f) {
                   detail::require(std::isfinite(f.q) && f.q >= 0.0,
                                   "power: exponent must be >= 0 (non-decreasing)");
                 },
                 [](const PowerOfMaxFn& f) {
                   detail::require(std::isfinite(f.q) && f.q >= 0.0,
                                   "maxpow: exponent must be >= 0 (non-decreasing)");
                   detail::require(std::isfinite(f.L) && f.L >= 0.0, "maxpow: L must be >= 0");
                 },
             },
             fn);
}

namespace {

double parse_field(std::string_view s, std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    detail::fail_precondition("cannot parse function '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

MonotoneFn parse_monotone(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    auto colon = text.find(':', pos);
    parts.push_back(text.substr(pos, colon == std::string_view::npos ? colon : colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  MonotoneFn fn;
  const auto& kind = parts[0];
  if (kind == "identity" && parts.size() == 1) {
    fn = IdentityFn{};
  } else if (kind == "power" && parts.size() == 2) {
    fn = PowerFn{parse_field(parts[1], text)};
  } else if (kind == "maxpow" && parts.size() == 3) {
    fn = PowerOfMaxFn{parse_field(parts[1], text), parse_field(parts[2], text)};
  } else if (kind == "const" && parts.size() == 2) {
    fn = ConstantFn{parse_field(parts[1], text)};
  } else {
    detail::fail_precondition("unknown function '" + std::string(text) +
                              "' (expected power:Q, maxpow:Q:L, identity or const:C)");
  }
  validate(fn);
  return fn;
}

std::string to_string(const MonotoneFn& fn) {
  std::ostringstream out;
  out.precision(17);
  std::visit(overloaded{
                 [&](const ConstantFn& f) { out << "const:" << f.c; },
                 [&](const IdentityFn&) { out << "identity"; },
                 [&](const PowerFn& f) { out << "power:" << f.q; },
                 [&](const PowerOfMaxFn& f) { out << "maxpow:" << f.q << ':' << f.L; },
             },
             fn);
  return out.str();
}

FunctionalSpec::FunctionalSpec(MonotoneFn outer, std::optional<MonotoneFn> inner,
                               std::optional<StepFunction> weight)
    : outer_(std::move(outer)), inner_(std::move(inner)), weight_(std::move(weight)) {
  validate(outer_);
  if (inner_) validate(*inner_);
}

FunctionalSpec FunctionalSpec::composed(MonotoneFn outer, MonotoneFn inner) {
  return FunctionalSpec(std::move(outer), std::move(inner), std::nullopt);
}

FunctionalSpec FunctionalSpec::weighted(MonotoneFn outer, StepFunction weight) {
  // StepFunction already guarantees a nonnegative non-increasing weight.
  return FunctionalSpec(std::move(outer), std::nullopt, std::move(weight));
}

const MonotoneFn& FunctionalSpec::inner() const {
  detail::require(inner_.has_value(), "FunctionalSpec: weighted spec has no inner function");
  return *inner_;
}

const StepFunction& FunctionalSpec::weight() const {
  detail::require(weight_.has_value(), "FunctionalSpec: composed spec has no weight");
  return *weight_;
}

std::string FunctionalSpec::describe() const {
  if (is_weighted()) return "outer=" + to_string(outer_) + " weight=step";
  return "outer=" + to_string(outer_) + " inner=" + to_string(*inner_);
}

double average_functional_integral(const StepFunction& g, const FunctionalSpec& spec, double k) {
  k = checked_k(g, k, "average_functional_integral");
  const StepFunction* weight = nullptr;
  if (spec.is_weighted()) {
    weight = &spec.weight();
    detail::require(weight->total_length() >= k * (1.0 - 1e-12),
                    "weight must be defined on all of (0, k]");
  }
  CompensatedSum sum;
  for_each_segment(
      g, weight, k, [&](double v, double) { return spec.inner_at(v); },
      [&](double a, double b, double v, double C, double w) {
        if (w != 0.0) sum.add(w * outer_of_average(spec.outer(), v, C, a, b));
      });
  return sum.value();
}

double outer_average_integral(const StepFunction& g, const MonotoneFn& outer, double k) {
  return average_functional_integral(g, FunctionalSpec::composed(outer, ConstantFn{1.0}), k);
}

double weighted_by_g_average_integral(const StepFunction& g, const MonotoneFn& outer, double k) {
  return average_functional_integral(g, FunctionalSpec::composed(outer, IdentityFn{}), k);
}

}  // namespace dyadic
