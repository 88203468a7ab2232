#include "doctest.h"
#include "test_support.hpp"

#include <cmath>

#include "dyadic/bellman.hpp"
#include "dyadic/errors.hpp"

using namespace dyadic;

namespace {

// Root of 2z^3 - 3z^2 + b = 0 in [1, 1.5] by the trigonometric cubic formula.
double omega3_trig(double b) { return 0.5 + std::cos(std::acos(1.0 - 2.0 * b) / 3.0); }

}  // namespace

TEST_CASE("hp examples and domain") {
  for (double p : {1.1, 2.0, 3.7}) {
    CHECK(hp(p, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(hp(p, p / (p - 1.0))) <= 1e-14);
    CHECK_THROWS_AS(hp(p, 0.9), DomainError);
    CHECK_THROWS_AS(hp(p, p / (p - 1.0) + 1e-3), DomainError);
  }
  CHECK(hp(2.0, 1.5) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("hp is strictly decreasing") {
  for (double p : {1.1, 1.5, 2.0, 3.0, 10.0}) {
    const double top = p / (p - 1.0);
    double prev = 2.0;
    for (int i = 0; i <= 1000; ++i) {
      double v = hp(p, 1.0 + (top - 1.0) * i / 1000.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("omega examples") {
  for (double p : {1.1, 2.0, 5.0}) {
    CHECK(omega(p, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(omega(p, 0.0) == doctest::Approx(p / (p - 1.0)).epsilon(1e-13));
  }
  CHECK(omega(2.0, 0.75) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(omega(3.0, 0.5) == doctest::Approx(1.3660254037844386).epsilon(1e-15));
  CHECK_THROWS_AS(omega(2.0, -0.01), DomainError);
  CHECK_THROWS_AS(omega(2.0, 1.01), DomainError);
}

TEST_CASE("omega round trip on a 1000-point grid") {
  for (double p : {1.1, 1.5, 2.0, 3.0, 10.0}) {
    for (int i = 0; i <= 1000; ++i) {
      double b = i / 1000.0;
      double z = omega(p, b);
      CHECK(std::abs(hp(p, z) - b) <= 1e-12);
      if (p == 2.0) CHECK(std::abs(z - (1.0 + std::sqrt(1.0 - b))) <= 1e-12);
      if (p == 3.0) CHECK(std::abs(z - omega3_trig(b)) <= 1e-12);
    }
  }
}

TEST_CASE("bellman2 examples") {
  CHECK(bellman2(2.0, 1.0, 2.0) == doctest::Approx(5.8284271247461901).epsilon(1e-14));
  for (double p : {1.5, 2.0, 3.0}) {
    CHECK(bellman2(p, 1.3, std::pow(1.3, p)) == doctest::Approx(std::pow(1.3, p)).epsilon(1e-14));
    CHECK(bellman2(p, 1e-9, 1.0) == doctest::Approx(std::pow(p / (p - 1.0), p)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(bellman2(2.0, 2.0, 3.0), PreconditionError);
  CHECK_THROWS_AS(bellman2(1.0, 1.0, 3.0), PreconditionError);
  CHECK_THROWS_AS(bellman2(2.0, 0.0, 3.0), PreconditionError);
}

TEST_CASE("bellman3 examples") {
  CHECK(bellman3(2.0, 1.0, 2.0, 2.0) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(bellman3(2.0, 1.0, 2.0, 1.5) == doctest::Approx(6.4122776601683793).epsilon(1e-14));
  const double c = 1.0 + std::sqrt(0.625);
  CHECK(bellman3(2.0, 1.0, 2.0, 1.5) == doctest::Approx(2.0 * c * c).epsilon(1e-14));
  for (double p : {1.5, 2.0, 3.0}) {
    CHECK(bellman3(p, 1.0, 2.0, 1.0) == doctest::Approx(bellman2(p, 1.0, 2.0)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(bellman3(2.0, 1.0, 2.0, 0.9), PreconditionError);
  CHECK_THROWS_AS(bellman3(2.0, 1.0, 0.5, 1.2), PreconditionError);
}

TEST_CASE("bellman3 is continuous at the threshold") {
  for (double p : {1.2, 1.5, 2.0, 3.0, 6.0}) {
    for (double f : {0.5, 1.0, 2.0}) {
      for (double ratio : {1.0, 1.5, 4.0}) {
        const double F = ratio * std::pow(f, p);
        const double L0 = p / (p - 1.0) * f;
        const double expected = std::pow(p / (p - 1.0), p) * F;
        double below = bellman3(p, f, F, L0 * (1.0 - 1e-13));
        double at = bellman3(p, f, F, L0);
        CHECK(std::abs(below - at) <= 1e-9 * std::max(1.0, at));
        CHECK(std::abs(at - expected) <= 1e-9 * std::max(1.0, expected));
      }
    }
  }
}

TEST_CASE("bellman3 is monotone in L and F and dominates L^p and bellman2") {
  for (double p : {1.5, 2.0, 3.0}) {
    const double f = 1.0;
    const double L0 = p / (p - 1.0);
    for (double F : {1.0, 1.3, 2.0, 5.0}) {
      double prev = 0.0;
      for (int i = 0; i <= 200; ++i) {
        double L = f + (2.0 * L0 - f) * i / 200.0;
        double v = bellman3(p, f, F, L);
        CHECK(v >= prev * (1.0 - 1e-12));
        CHECK(v >= std::pow(L, p) * (1.0 - 1e-12));
        CHECK(v >= bellman2(p, f, F) * (1.0 - 1e-12));
        CHECK(bellman3(p, f, F * 1.1, L) >= v * (1.0 - 1e-12));
        prev = v;
      }
    }
  }
}

TEST_CASE("h is strictly decreasing above f, so b stays in [0, 1]") {
  for (double p : {1.5, 2.0, 3.0, 10.0}) {
    for (double f : {0.3, 1.0, 4.0}) {
      CHECK(level_numerator(p, f, f) == doctest::Approx(std::pow(f, p)).epsilon(1e-14));
      const double L0 = p / (p - 1.0) * f;
      double prev = level_numerator(p, f, f);
      for (int i = 1; i <= 500; ++i) {
        double t = f + (L0 - f) * i / 500.0;
        double h = level_numerator(p, f, t);
        CHECK(h < prev);
        prev = h;
        BellmanPoint pt(p, f, 1.5 * std::pow(f, p), t);
        CHECK(pt.b() <= std::pow(f, p) / pt.F());
      }
    }
  }
}

TEST_CASE("bellman point accessors and validation") {
  BellmanPoint pt(2.0, 1.0, 2.0, 1.5);
  CHECK(pt.L0() == 2.0);
  CHECK(pt.b() == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(pt.below_threshold());
  CHECK(pt.value() == doctest::Approx(6.4122776601683793).epsilon(1e-14));
  CHECK_FALSE(BellmanPoint(2.0, 1.0, 2.0, 2.0).below_threshold());
  CHECK_THROWS_AS(BellmanPoint(0.5, 1.0, 2.0, 1.5), PreconditionError);
  CHECK_THROWS_AS(BellmanPoint(2.0, -1.0, 2.0, 1.5), PreconditionError);
  CHECK_THROWS_AS(BellmanPoint(2.0, 1.0, 0.99, 1.5), PreconditionError);
  CHECK_THROWS_AS(BellmanPoint(2.0, 1.0, 2.0, 0.5), PreconditionError);
}
