#pragma once

#include <cstddef>
#include <vector>

#include "dyadic/functional.hpp"
#include "dyadic/maximal.hpp"
#include "dyadic/step_function.hpp"
#include "dyadic/tree.hpp"

namespace dyadic {

/// One-dimensional side of the symmetrization identity:
/// integral over (0, k] of outer((1/t) int_0^t g) * (inner(g(t)) or h(t)).
double rhs_integral(const StepFunction& g, const FunctionalSpec& spec, double k);

/// Tree side for one function: the largest integral of outer(M_T phi) * inner(phi)
/// over a set K of measure k.
///
/// Atoms are taken greedily by integrand density and the boundary atom is
/// prorated, so K is a fractional union of atoms (the best set of measure k
/// for a nonnegative integrand on an atomic space). In weighted mode the
/// rearranged side is used: integral over (0, k] of outer((M_T phi)*) * h.
double lhs_functional(const ProbTree& tree, const AtomFunction& phi, const FunctionalSpec& spec,
                      double k);
double lhs_functional(const AtomFunction& phi, const MaximalResult& maximal,
                      const FunctionalSpec& spec, double k);

inline constexpr std::size_t kBruteForceMaxAtoms = 10;

struct BruteForceResult {
  double value = 0.0;
  /// Leaf values of the maximizing assignment.
  std::vector<double> assignment;
  /// Number of distinct assignments evaluated.
  std::size_t evaluated = 0;
};

/// Exhaustive supremum of lhs_functional over every distinct assignment of
/// g's values to the leaves of `tree`.
///
/// `g` must have one piece per leaf and each piece length must equal the
/// (uniform) leaf measure; at most kBruteForceMaxAtoms leaves. Work is split by
/// the value placed on the first leaf and run on up to `workers` threads
/// (0 = hardware concurrency); the result does not depend on `workers`.
BruteForceResult brute_force_sup(const StepFunction& g, const ProbTree& tree,
                                 const FunctionalSpec& spec, double k, unsigned workers = 0);

}  // namespace dyadic
