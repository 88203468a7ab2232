#include "dyadic/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "dyadic/errors.hpp"
#include "dyadic/numeric.hpp"

namespace dyadic {

namespace {

// Relative slack on the weak-type comparison; both sides are floating sums of
// at most a few thousand terms.
constexpr double kWeakTypeSlack = 1e-12;

void require_match(const ProbTree& tree, const AtomFunction& phi) {
  detail::require(lives_on(phi, tree), "tree/function mismatch: phi is not defined on this tree");
}

}  // namespace

std::vector<double> node_averages(const ProbTree& tree, const AtomFunction& phi) {
  require_match(tree, phi);
  const auto& nodes = tree.nodes();
  std::vector<double> integral(nodes.size(), 0.0);
  auto leaves = tree.leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    integral[leaves[i]] = nodes[leaves[i]].measure * phi[i];
  }
  // Children always follow their parent, so a reverse scan is bottom-up.
  for (NodeId id = nodes.size(); id-- > 0;) {
    if (nodes[id].is_leaf()) continue;
    CompensatedSum sum;
    for (NodeId child : nodes[id].children) sum.add(integral[child]);
    integral[id] = sum.value();
  }
  std::vector<double> average(nodes.size());
  for (NodeId id = 0; id < nodes.size(); ++id) average[id] = integral[id] / nodes[id].measure;
  // A leaf's average is its value, without the round trip through the measure.
  for (std::size_t i = 0; i < leaves.size(); ++i) average[leaves[i]] = phi[i];
  return average;
}

MaximalResult maximal_operator(const ProbTree& tree, const AtomFunction& phi) {
  const auto average = node_averages(tree, phi);
  const auto& nodes = tree.nodes();
  std::vector<double> best(nodes.size());
  std::vector<NodeId> best_node(nodes.size());
  best[0] = average[0];
  best_node[0] = 0;
  for (NodeId id = 1; id < nodes.size(); ++id) {
    NodeId parent = nodes[id].parent;
    if (average[id] > best[parent]) {
      best[id] = average[id];
      best_node[id] = id;
    } else {
      best[id] = best[parent];
      best_node[id] = best_node[parent];
    }
  }
  MaximalResult result;
  auto leaves = tree.leaves();
  result.value.reserve(leaves.size());
  result.argmax.reserve(leaves.size());
  for (NodeId leaf : leaves) {
    result.value.push_back(best[leaf]);
    result.argmax.push_back(best_node[leaf]);
  }
  return result;
}

WeakTypeReport weak_type_report(const AtomFunction& phi, const MaximalResult& maximal,
                                double lambda, LevelSet kind) {
  detail::require(lambda > 0.0, "weak_type_report: lambda must be > 0");
  detail::require(maximal.value.size() == phi.size(), "weak_type_report: size mismatch");
  CompensatedSum measure, mass;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    double m = maximal.value[i];
    bool inside = kind == LevelSet::Strict ? m > lambda : m >= lambda;
    if (!inside) continue;
    double mu = phi.tree().leaf_measure(i);
    measure.add(mu);
    mass.add(mu * phi[i]);
  }
  WeakTypeReport r;
  r.lambda = lambda;
  r.level_measure = measure.value();
  r.bound = mass.value() / lambda;
  r.holds = r.level_measure <= r.bound * (1.0 + kWeakTypeSlack);
  return r;
}

WeakTypeReport weak_type_report(const ProbTree& tree, const AtomFunction& phi, double lambda,
                                LevelSet kind) {
  return weak_type_report(phi, maximal_operator(tree, phi), lambda, kind);
}

double doob_ratio(const AtomFunction& phi, const MaximalResult& maximal, double p) {
  detail::require(p > 1.0, "doob_ratio: p must be > 1");
  CompensatedSum num, den;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    double mu = phi.tree().leaf_measure(i);
    num.add(mu * std::pow(maximal.value[i], p));
    den.add(mu * std::pow(phi[i], p));
  }
  if (!(den.value() > 0.0)) {
    throw PreconditionError("doob_ratio: degenerate input, phi is identically zero");
  }
  return std::pow(num.value() / den.value(), 1.0 / p) * (p - 1.0) / p;
}

double doob_ratio(const ProbTree& tree, const AtomFunction& phi, double p) {
  return doob_ratio(phi, maximal_operator(tree, phi), p);
}

double truncated_maximal_moment(const AtomFunction& phi, const MaximalResult& maximal, double L,
                                double p) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    sum.add(phi.tree().leaf_measure(i) * std::pow(std::max(maximal.value[i], L), p));
  }
  return sum.value();
}

}  // namespace dyadic
