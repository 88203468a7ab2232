#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "dyadic/functional.hpp"
#include "dyadic/step_function.hpp"
#include "dyadic/tree.hpp"

namespace dyadic {

inline constexpr double kDefaultTailTolerance = 1e-6;

/// One level of the chain: the node I_m of measure s_m = (1-a)^m splits into
/// I_{m+1} and the remainder A_m of measure a (1-a)^m, which carries the
/// values of g on (s_{m+1}, s_m].
struct ExtremizerLevel {
  NodeId chain_node = 0;      ///< I_m
  NodeId remainder_node = 0;  ///< A_m
  double outer_end = 0.0;     ///< s_m
  double inner_end = 0.0;     ///< s_{m+1}
  double chain_average = 0.0;      ///< theta_m = (1/s_m) int_0^{s_m} g
  double remainder_average = 0.0;  ///< gamma_m = average of g over (s_{m+1}, s_m]
};

/// Chain realization of the extremizer tree for parameter a, truncated after
/// `levels.size()` levels. The terminal node I_M carries g on (0, s_M].
struct ExtremizerTree {
  std::shared_ptr<const ProbTree> tree;
  double a = 0.0;
  std::vector<ExtremizerLevel> levels;
  NodeId tail_node = 0;
  double tail_end = 0.0;       ///< s_M
  double tail_average = 0.0;   ///< theta_M

  std::size_t truncation() const { return levels.size(); }
};

struct Extremizer {
  ExtremizerTree structure;
  AtomFunction phi;
};

/// Smallest truncation M with int_0^{(1-a)^M} g < tail_tolerance * int_0^1 g.
std::size_t minimal_truncation(const StepFunction& g, double a,
                               double tail_tolerance = kDefaultTailTolerance);

/// Build the chain tree and the function phi_a whose decreasing rearrangement
/// is g. Each remainder keeps g's step structure on its chunk (one sub-atom per
/// piece of g there). Throws PreconditionError if a is not in (0, 1) or the
/// truncation leaves more than tail_tolerance * f of g's mass in the tail, and
/// InvariantViolation if the built function fails its self-check.
Extremizer build_extremizer(const StepFunction& g, double a, std::size_t truncation,
                            double tail_tolerance = kDefaultTailTolerance);

/// Deviations of a built extremizer from its defining properties.
struct ExtremizerCheck {
  double rearrangement_l1 = 0.0;  ///< integral of |phi_a* - g|
  double chain_average = 0.0;     ///< max relative error of averages over I_m vs theta_m
  double remainder_average = 0.0; ///< max relative error of averages over A_m vs gamma_m

  double worst() const;
};

ExtremizerCheck check_extremizer(const Extremizer& ex, const StepFunction& g);

/// sum_m outer(theta_m) * int_{s_{m+1}}^{s_m} inner(g), with the tail term
/// outer(theta_M) * int_0^{s_M} inner(g). Composed specs only.
double extremizer_lower_bound(const StepFunction& g, double a, std::size_t truncation,
                              const FunctionalSpec& spec,
                              double tail_tolerance = kDefaultTailTolerance);

struct ExtremizerSweepRow {
  double a = 0.0;
  std::size_t truncation = 0;
  double lower_bound = 0.0;
  double rhs = 0.0;
  double rel_gap = 0.0;  ///< (rhs - lower_bound) / rhs
};

/// Lower bound against the one-dimensional integral for each a, using
/// minimal_truncation for the level count.
std::vector<ExtremizerSweepRow> extremizer_sweep(const StepFunction& g, const FunctionalSpec& spec,
                                                 const std::vector<double>& a_values,
                                                 double tail_tolerance = kDefaultTailTolerance);

}  // namespace dyadic
