#include "doctest.h"
#include "test_support.hpp"

#include "dyadic/errors.hpp"
#include "dyadic/extremizer.hpp"
#include "dyadic/maximal.hpp"
#include "dyadic/symmetrize.hpp"

using namespace dyadic;
using testing::two_step;

namespace {

FunctionalSpec square_spec() { return FunctionalSpec::composed(PowerFn{2.0}, ConstantFn{1.0}); }

}  // namespace

TEST_CASE("constant g gives a constant extremizer") {
  StepFunction g = StepFunction::constant(1.5);
  Extremizer ex = build_extremizer(g, 0.3, 10, 1.0);
  for (double v : ex.phi.values()) CHECK(v == 1.5);
  for (const auto& level : ex.structure.levels) {
    CHECK(level.chain_average == doctest::Approx(1.5));
    CHECK(level.remainder_average == doctest::Approx(1.5));
  }
  CHECK(extremizer_lower_bound(g, 0.3, 10, square_spec(), 1.0) ==
        doctest::Approx(rhs_integral(g, square_spec(), 1.0)).epsilon(1e-14));
}

TEST_CASE("two-step g with a = 1/2 and one level") {
  Extremizer ex = build_extremizer(two_step(), 0.5, 1, 1.0);
  const auto& s = ex.structure;
  REQUIRE(s.truncation() == 1);
  CHECK(s.levels[0].outer_end == 1.0);
  CHECK(s.levels[0].inner_end == 0.5);
  CHECK(s.levels[0].chain_average == doctest::Approx(1.5));
  CHECK(s.levels[0].remainder_average == doctest::Approx(1.0));
  CHECK(s.tail_average == doctest::Approx(2.0));
  CHECK(ex.phi[s.tree->leaf_index(s.levels[0].remainder_node)] == 1.0);
  CHECK(ex.phi[s.tree->leaf_index(s.tail_node)] == 2.0);
  CHECK(s.tree->node(s.levels[0].remainder_node).measure == 0.5);
}

TEST_CASE("chain measures follow (1 - a)^m") {
  const double a = 0.2;
  Extremizer ex = build_extremizer(testing::four_step(), a, 30, 1.0);
  const auto& tree = *ex.structure.tree;
  for (std::size_t m = 0; m < ex.structure.truncation(); ++m) {
    const auto& level = ex.structure.levels[m];
    CHECK(tree.node(level.chain_node).measure == doctest::Approx(std::pow(1 - a, m)).epsilon(1e-13));
    CHECK(tree.node(level.remainder_node).measure ==
          doctest::Approx(a * std::pow(1 - a, m)).epsilon(1e-12));
  }
}

TEST_CASE("self-check holds on fuzzed g with a = 0.1 and 200 levels") {
  FuzzCorpus rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    StepFunction g = rng.next_step_function();
    Extremizer ex = build_extremizer(g, 0.1, 200, 1.0);
    ExtremizerCheck check = check_extremizer(ex, g);
    CHECK(check.worst() <= 1e-9);
    CHECK(testing::rel_err(ex.phi.moment(1.0), g.integral()) <= 1e-12);
    CHECK(testing::rel_err(ex.phi.moment(2.0), step_power_integral(g, 2.0, 1.0)) <= 1e-12);
  }
}

TEST_CASE("lower bound sits below the tree value, which sits below rhs") {
  FuzzCorpus rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    StepFunction g = rng.next_step_function();
    for (const auto& spec : {square_spec(),
                             FunctionalSpec::composed(PowerOfMaxFn{2.0, 1.2 * g.integral()},
                                                      ConstantFn{1.0}),
                             FunctionalSpec::composed(PowerFn{1.0}, IdentityFn{})}) {
      const double a = 0.25;
      const std::size_t M = minimal_truncation(g, a, 1e-4);
      Extremizer ex = build_extremizer(g, a, M, 1e-4);
      double lower = extremizer_lower_bound(g, a, M, spec, 1e-4);
      double lhs = lhs_functional(*ex.structure.tree, ex.phi, spec, 1.0);
      double rhs = rhs_integral(g, spec, 1.0);
      CHECK(lower <= lhs * (1.0 + 1e-12));
      CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("two-step lower bound at a = 0.01 is within 5% of 3.44315") {
  const double a = 0.01;
  const std::size_t M = minimal_truncation(two_step(), a, 1e-3);
  CHECK(std::pow(1 - a, M) * 2.0 < 1e-3 * 1.5);
  double lower = extremizer_lower_bound(two_step(), a, M, square_spec(), 1e-3);
  CHECK(lower <= 3.4431471805599453);
  CHECK(lower >= 0.95 * 3.4431471805599453);
}

TEST_CASE("sweep gaps shrink as a decreases") {
  std::vector<double> as{0.2, 0.1, 0.05, 0.01};
  auto rows = extremizer_sweep(two_step(), square_spec(), as);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].a == as[i]);
    CHECK(rows[i].rel_gap >= 0.0);
    if (i > 0) CHECK(rows[i].rel_gap <= rows[i - 1].rel_gap + 1e-3);
  }
  CHECK(rows.back().rel_gap < 0.05);
}

TEST_CASE("weighted functional on extremizer trees stays below its integral") {
  StepFunction h({{0.4, 3.0}, {0.6, 1.0}});
  auto spec = FunctionalSpec::weighted(PowerFn{2.0}, h);
  const double rhs = rhs_integral(testing::four_step(), spec, 1.0);
  double prev = 0.0;
  for (double a : {0.2, 0.1, 0.05, 0.01}) {
    const std::size_t M = minimal_truncation(testing::four_step(), a);
    Extremizer ex = build_extremizer(testing::four_step(), a, M);
    double lhs = lhs_functional(*ex.structure.tree, ex.phi, spec, 1.0);
    CHECK(lhs <= rhs * (1.0 + 1e-12));
    CHECK(lhs >= prev - 1e-3 * rhs);
    prev = lhs;
  }
  CHECK(prev >= 0.95 * rhs);
}

TEST_CASE("extremizer preconditions") {
  CHECK_THROWS_AS(build_extremizer(two_step(), 0.0, 5), PreconditionError);
  CHECK_THROWS_AS(build_extremizer(two_step(), 1.0, 5), PreconditionError);
  CHECK_THROWS_AS(build_extremizer(two_step(), 0.5, 0), PreconditionError);
  CHECK_THROWS_AS(build_extremizer(two_step(), 0.5, 3), PreconditionError);
  CHECK_THROWS_AS(build_extremizer(StepFunction({{0.5, 1.0}}), 0.5, 30), PreconditionError);
  CHECK_THROWS_AS(extremizer_lower_bound(two_step(), 0.5, 30,
                                         FunctionalSpec::weighted(PowerFn{1.0}, two_step())),
                  PreconditionError);
  CHECK(minimal_truncation(two_step(), 0.5, 1e-6) == 21);
}
