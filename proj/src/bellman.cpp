#include "dyadic/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyadic/errors.hpp"

namespace dyadic {

namespace {

constexpr double kEdgeSlack = 1e-12;
constexpr double kBracketWidth = 1e-14;

double conjugate(double p) { return p / (p - 1.0); }

void require_exponent(double p, const char* who) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError(std::string(who) + ": p must be > 1");
}

double hp_unchecked(double p, double z) { return std::pow(z, p - 1.0) * (p - (p - 1.0) * z); }

double hp_derivative(double p, double z) {
  return p * (p - 1.0) * std::pow(z, p - 2.0) * (1.0 - z);
}

}  // namespace

double hp(double p, double z) {
  require_exponent(p, "hp");
  const double top = conjugate(p);
  if (!(z >= 1.0 - kEdgeSlack) || !(z <= top * (1.0 + kEdgeSlack))) {
    throw DomainError("hp: z must lie in [1, p/(p-1)]");
  }
  return hp_unchecked(p, std::clamp(z, 1.0, top));
}

double omega(double p, double b) {
  require_exponent(p, "omega");
  if (!(b >= 0.0 && b <= 1.0)) throw DomainError("omega: b must lie in [0, 1]");
  const double top = conjugate(p);
  if (b == 1.0) return 1.0;
  if (b == 0.0) return top;

  double lo = 1.0, hi = top;
  for (int iter = 0; iter < 200 && hi - lo > kBracketWidth; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (hp_unchecked(p, mid) > b) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  double z = 0.5 * (lo + hi);
  double residual = std::abs(hp_unchecked(p, z) - b);
  for (int iter = 0; iter < 3 && residual > 0.0; ++iter) {
    double slope = hp_derivative(p, z);
    if (slope == 0.0) break;
    double candidate = z - (hp_unchecked(p, z) - b) / slope;
    if (!(candidate >= 1.0 && candidate <= top)) break;
    double r = std::abs(hp_unchecked(p, candidate) - b);
    if (!(r < residual)) break;
    z = candidate;
    residual = r;
  }
  return z;
}

double level_numerator(double p, double f, double t) {
  return p * std::pow(t, p - 1.0) * f - (p - 1.0) * std::pow(t, p);
}

BellmanPoint::BellmanPoint(double p, double f, double F, double L) : p_(p), f_(f), F_(F), L_(L) {
  detail::require(p > 1.0 && std::isfinite(p), "BellmanPoint: p must be > 1");
  detail::require(f > 0.0 && std::isfinite(f), "BellmanPoint: f must be > 0");
  detail::require(std::isfinite(F) && std::pow(f, p) <= F * (1.0 + kEdgeSlack),
                  "BellmanPoint: need 0 < f^p <= F");
  detail::require(std::isfinite(L) && L >= f * (1.0 - kEdgeSlack), "BellmanPoint: need L >= f");
}

double bellman2(double p, double f, double F) {
  detail::require(p > 1.0 && std::isfinite(p), "bellman2: p must be > 1");
  detail::require(f > 0.0 && std::isfinite(F) && std::pow(f, p) <= F * (1.0 + kEdgeSlack),
                  "bellman2: need 0 < f^p <= F");
  double ratio = std::min(1.0, std::pow(f, p) / F);
  return F * std::pow(omega(p, ratio), p);
}

double bellman3(double p, double f, double F, double L) {
  detail::require(p > 1.0 && std::isfinite(p), "bellman3: p must be > 1");
  const BellmanPoint point(p, f, F, L);
  if (!point.below_threshold()) {
    return std::pow(L, p) + std::pow(conjugate(p), p) * (F - std::pow(f, p));
  }
  double b = point.b();
  // h is decreasing on [f, oo), so 0 <= b <= f^p / F <= 1 for admissible inputs.
  if (!(b >= -kEdgeSlack && b <= 1.0 + kEdgeSlack)) {
    throw InvariantViolation("bellman3: b = " + std::to_string(b) + " outside [0, 1]");
  }
  return F * std::pow(omega(p, std::clamp(b, 0.0, 1.0)), p);
}

}  // namespace dyadic
