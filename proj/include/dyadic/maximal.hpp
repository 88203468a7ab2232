#pragma once

#include <vector>

#include "dyadic/tree.hpp"

namespace dyadic {

/// Tree maximal function of a simple function, one entry per leaf.
struct MaximalResult {
  std::vector<double> value;
  /// Ancestor (possibly the leaf itself) whose average attains the maximum;
  /// the one closest to the root wins ties.
  std::vector<NodeId> argmax;
};

/// Average of phi over every node of the tree, indexed by node id.
std::vector<double> node_averages(const ProbTree& tree, const AtomFunction& phi);

/// M_T phi on each leaf: the largest average over the sets of the tree
/// containing it. Leaves are members of the tree, so M_T phi >= phi.
MaximalResult maximal_operator(const ProbTree& tree, const AtomFunction& phi);

enum class LevelSet {
  Strict,     ///< {M_T phi > lambda}
  NonStrict,  ///< {M_T phi >= lambda}
};

/// Both sides of the weak type (1,1) inequality at one level.
struct WeakTypeReport {
  double lambda = 0.0;
  double level_measure = 0.0;  ///< mu({M_T phi > lambda})
  double bound = 0.0;          ///< (1/lambda) * integral of phi over that set
  bool holds = false;
};

WeakTypeReport weak_type_report(const ProbTree& tree, const AtomFunction& phi, double lambda,
                                LevelSet kind = LevelSet::Strict);
WeakTypeReport weak_type_report(const AtomFunction& phi, const MaximalResult& maximal,
                                double lambda, LevelSet kind = LevelSet::Strict);

/// ||M_T phi||_p / ((p/(p-1)) ||phi||_p). Doob's inequality says this is <= 1.
double doob_ratio(const ProbTree& tree, const AtomFunction& phi, double p);
double doob_ratio(const AtomFunction& phi, const MaximalResult& maximal, double p);

/// Integral over X of max(M_T phi, L)^p, summed exactly over atoms.
double truncated_maximal_moment(const AtomFunction& phi, const MaximalResult& maximal, double L,
                                double p);

}  // namespace dyadic
