#pragma once

namespace dyadic {

/// H_p(z) = -(p-1) z^p + p z^(p-1) on [1, p/(p-1)]; strictly decreasing from
/// 1 to 0. Evaluated in the factored form z^(p-1) (p - (p-1) z).
double hp(double p, double z);

/// Inverse of H_p: the z in [1, p/(p-1)] with hp(p, z) = b, for b in [0, 1].
/// Bisection to a bracket of width 1e-14 followed by a Newton polish.
double omega(double p, double b);

/// Two-variable Bellman function F * omega_p(f^p / F)^p, for 0 < f^p <= F.
double bellman2(double p, double f, double F);

/// Three-variable Bellman function. For L < L0 = (p/(p-1)) f it is
/// F * omega_p(b)^p with b = (p L^(p-1) f - (p-1) L^p) / F; for L >= L0 it is
/// L^p + (p/(p-1))^p (F - f^p).
double bellman3(double p, double f, double F, double L);

/// h(t) = p t^(p-1) f - (p-1) t^p, strictly decreasing for t > f with h(f) = f^p.
double level_numerator(double p, double f, double t);

/// Admissible arguments (p, f, F, L) of the three-variable Bellman function.
class BellmanPoint {
 public:
  /// Throws PreconditionError unless p > 1, 0 < f^p <= F and L >= f.
  BellmanPoint(double p, double f, double F, double L);

  double p() const { return p_; }
  double f() const { return f_; }
  double F() const { return F_; }
  double L() const { return L_; }

  /// Branch threshold L0 = (p/(p-1)) f.
  double L0() const { return p_ / (p_ - 1.0) * f_; }
  /// b = h(L) / F; in [0, 1] exactly when L <= L0.
  double b() const { return level_numerator(p_, f_, L_) / F_; }
  bool below_threshold() const { return L_ < L0(); }

  double value() const { return bellman3(p_, f_, F_, L_); }

 private:
  double p_, f_, F_, L_;
};

}  // namespace dyadic
