#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "dyadic/step_function.hpp"

namespace dyadic {

/// t -> t^q (q >= 0).
struct PowerFn {
  double q = 1.0;
};
/// t -> max(t, L)^q (q >= 0, L >= 0).
struct PowerOfMaxFn {
  double q = 1.0;
  double L = 0.0;
};
/// t -> t.
struct IdentityFn {};
/// t -> c (c >= 0).
struct ConstantFn {
  double c = 1.0;
};

/// Nonnegative non-decreasing functions on [0, oo) used to build functionals.
using MonotoneFn = std::variant<PowerFn, PowerOfMaxFn, IdentityFn, ConstantFn>;

double evaluate(const MonotoneFn& fn, double t);

/// Throws PreconditionError when the parameters break monotonicity or sign.
void validate(const MonotoneFn& fn);

/// Text form: `power:Q`, `maxpow:Q:L`, `identity`, `const:C`.
MonotoneFn parse_monotone(std::string_view text);
std::string to_string(const MonotoneFn& fn);

/// The functional integral of outer(maximal function) * (second factor).
///
/// The second factor is either inner(phi), composed pointwise with the
/// function, or an explicit non-increasing weight h(t) on the rearrangement
/// side.
class FunctionalSpec {
 public:
  static FunctionalSpec composed(MonotoneFn outer, MonotoneFn inner);
  static FunctionalSpec weighted(MonotoneFn outer, StepFunction weight);

  const MonotoneFn& outer() const { return outer_; }
  bool is_weighted() const { return weight_.has_value(); }
  /// Composed mode only.
  const MonotoneFn& inner() const;
  /// Weighted mode only.
  const StepFunction& weight() const;

  double outer_at(double t) const { return evaluate(outer_, t); }
  double inner_at(double v) const { return evaluate(inner(), v); }

  std::string describe() const;

 private:
  FunctionalSpec(MonotoneFn outer, std::optional<MonotoneFn> inner,
                 std::optional<StepFunction> weight);

  MonotoneFn outer_;
  std::optional<MonotoneFn> inner_;
  std::optional<StepFunction> weight_;
};

/// Integral over (0, k] of outer(Hardy average of g) times either inner(g)
/// or the weight. Closed forms for integer powers; adaptive Gauss-Kronrod
/// per smooth segment otherwise.
double average_functional_integral(const StepFunction& g, const FunctionalSpec& spec, double k);

/// Integral over (0, k] of outer(Hardy average of g) alone (second factor 1).
double outer_average_integral(const StepFunction& g, const MonotoneFn& outer, double k);

/// Integral over (0, k] of g(t) * outer(Hardy average of g).
double weighted_by_g_average_integral(const StepFunction& g, const MonotoneFn& outer, double k);

}  // namespace dyadic
