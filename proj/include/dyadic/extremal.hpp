#pragma once

#include <cstddef>
#include <vector>

#include "dyadic/step_function.hpp"

namespace dyadic {

/// v_g(L) = int_0^1 max(Av g, L)^p and u_g(L) = int_0^1 g max(Av g, L)^(p-1),
/// Av g(t) = (1/t) int_0^t g.
struct VuValues {
  double v = 0.0;
  double u = 0.0;
  /// Point where the Hardy average falls to L (0 when L > sup g, 1 when L <= f).
  double crossover = 0.0;
  /// L is below the mean of g; the values are still exact, but the identity
  /// relating v and u assumes L >= f.
  bool below_mean = false;
};

VuValues vu_functionals(const StepFunction& g, double p, double L);

/// v - [L^p - (p/(p-1)) f L^(p-1) + (p/(p-1)) u]; zero for every g when L >= f.
double lemma41_residual(double p, double f, double L, const VuValues& vu);
double lemma41_residual(const StepFunction& g, double p, double L);

/// Extremal function for the three-variable Bellman problem below the
/// threshold: g(t) = K t^(-1+1/c) on (0, gamma], L/c on (gamma, 1], where
/// c = omega_p(b). Its Hardy average satisfies max(Av g, L) = c g, so
/// v_g(L) = c^p F exactly.
class PowerLawExtremal {
 public:
  double p() const { return p_; }
  double f() const { return f_; }
  double F() const { return F_; }
  double L() const { return L_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double gamma() const { return gamma_; }
  double K() const { return K_; }
  /// The gamma given by the first-moment formula (f - L/c) / (L (1 - 1/c)).
  double gamma_from_mean() const { return gamma_mean_; }
  /// The gamma given by the p-th moment formula (F - L^p/c^p) / (L^p (1/b - 1/c^p)).
  double gamma_from_moment() const { return gamma_moment_; }
  /// Constant solution g = f (c = 1 or gamma = 0).
  bool is_flat() const { return gamma_ == 0.0; }

  /// Decay rate alpha = 1 - 1/c of the power part, g ~ t^(-alpha).
  double decay() const { return 1.0 - 1.0 / c_; }

  double value(double t) const;
  double average(double t) const;
  double integral_to(double t) const;
  /// int_0^gamma g^p (the power part).
  double head_power_integral() const;
  /// int_0^1 g^p.
  double power_integral() const;

  /// v and u at a level >= L(), from closed forms.
  VuValues vu(double level) const;

  /// Step approximation on a geometric grid t_j = gamma r^j. Each grid cell is
  /// split in two halves whose values match the cell's integral of g and of
  /// g^p, so both moments are preserved up to the head cell (0, t_J], which
  /// carries its average and less than `head_tolerance` * F of the p-th
  /// moment. When the decay is close to 1/p the required cutoff can fall
  /// below ~1e-280; the grid stops there and the head keeps more of the
  /// p-th moment than requested.
  StepFunction discretize(double ratio = 0.9, double head_tolerance = 1e-7) const;

 private:
  friend PowerLawExtremal solve_extremal_g(double p, double f, double F, double L);
  double p_ = 0, f_ = 0, F_ = 0, L_ = 0, b_ = 0, c_ = 1, gamma_ = 0, K_ = 0;
  double gamma_mean_ = 0, gamma_moment_ = 0;
};

/// Build and verify the extremal for f <= L < (p/(p-1)) f, f^p <= F.
/// Verified: both gamma formulas agree, int g = f and int g^p = F (relative
/// 1e-9), continuity at gamma, and max(Av g, L) = c g on a 1000-point grid.
/// Throws PreconditionError outside that case and InvariantViolation if a
/// check fails.
PowerLawExtremal solve_extremal_g(double p, double f, double F, double L);

struct SharpnessTerm {
  std::size_t n = 0;
  double L_n = 0, b_n = 0, c_n = 0, gamma_n = 0, k_n = 0;
  /// int max(Av g_n, L0)^p.
  double v_at_threshold = 0;
  /// int_{L0}^{L} p s^(p-2) (int_{Av g_n > s} g_n) ds, exact.
  double a_n = 0;
  /// theta_L * int_{Av g_n > L0} g_n, the bound on a_n.
  double a_n_bound = 0;
  /// v_{g_n}(L) = L^p - L0^p + v_at_threshold - a_n.
  double v = 0;
  /// L^p - L0^p + c_n^p F - a_n_bound, a lower bound for v.
  double v_lower = 0;
  double rel_gap = 0;  ///< (target - v) / target
};

struct SharpnessSequence {
  double p = 0, f = 0, F = 0, L = 0, L0 = 0;
  double target = 0;  ///< L^p + (p/(p-1))^p (F - f^p)
  std::vector<SharpnessTerm> terms;
};

/// Default schedule L_n = max(f, L0 (1 - 2^-n)), n = 1..n_terms.
double sharpness_level(double p, double f, std::size_t n);

/// Extremals g_n at levels L_n increasing to L0 and their v_{g_n}(L) for a
/// level L >= L0. Throws PreconditionError when L < L0.
SharpnessSequence sharpness_sequence(double p, double f, double F, double L, std::size_t n_terms);

}  // namespace dyadic
