#include "dyadic/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <thread>

#include "dyadic/errors.hpp"
#include "dyadic/numeric.hpp"

namespace dyadic {

double rhs_integral(const StepFunction& g, const FunctionalSpec& spec, double k) {
  return average_functional_integral(g, spec, k);
}

double lhs_functional(const AtomFunction& phi, const MaximalResult& maximal,
                      const FunctionalSpec& spec, double k) {
  if (!(k > 0.0) || k > 1.0 + 1e-12) throw DomainError("lhs_functional: k must lie in (0, 1]");
  const ProbTree& tree = phi.tree();
  const std::size_t n = phi.size();

  if (spec.is_weighted()) {
    std::vector<double> measures(n), outer_values(n);
    for (std::size_t i = 0; i < n; ++i) {
      measures[i] = tree.leaf_measure(i);
      outer_values[i] = spec.outer_at(maximal.value[i]);
    }
    // outer is non-decreasing, so rearranging outer(M) is outer of the rearrangement.
    StepFunction rearranged = decreasing_rearrangement(measures, outer_values);
    return pieced_product_integral(rearranged, spec.weight(), std::min(k, 1.0));
  }

  std::vector<double> density(n);
  for (std::size_t i = 0; i < n; ++i) {
    density[i] = spec.outer_at(maximal.value[i]) * spec.inner_at(phi[i]);
  }
  if (k >= 1.0) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < n; ++i) sum.add(tree.leaf_measure(i) * density[i]);
    return sum.value();
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return density[a] > density[b]; });
  CompensatedSum sum;
  double remaining = k;
  for (std::size_t i : order) {
    if (remaining <= 0.0) break;
    double take = std::min(remaining, tree.leaf_measure(i));
    sum.add(take * density[i]);
    remaining -= take;
  }
  return sum.value();
}

double lhs_functional(const ProbTree& tree, const AtomFunction& phi, const FunctionalSpec& spec,
                      double k) {
  return lhs_functional(phi, maximal_operator(tree, phi), spec, k);
}

namespace {

struct BlockBest {
  double value = -1.0;
  std::vector<double> assignment;
  std::size_t evaluated = 0;
};

BlockBest search_block(std::shared_ptr<const ProbTree> tree, std::vector<double> rest, double head,
                       const FunctionalSpec& spec, double k) {
  BlockBest best;
  std::sort(rest.begin(), rest.end());
  std::vector<double> values(rest.size() + 1);
  do {
    values[0] = head;
    std::copy(rest.begin(), rest.end(), values.begin() + 1);
    AtomFunction phi(tree, values);
    double v = lhs_functional(*tree, phi, spec, k);
    ++best.evaluated;
    if (v > best.value) {
      best.value = v;
      best.assignment = values;
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

}  // namespace

BruteForceResult brute_force_sup(const StepFunction& g, const ProbTree& tree,
                                 const FunctionalSpec& spec, double k, unsigned workers) {
  const std::size_t n = tree.leaf_count();
  if (n > kBruteForceMaxAtoms) {
    detail::fail_precondition("brute_force_sup: " + std::to_string(n) +
                              " atoms is too many for exhaustive enumeration (limit " +
                              std::to_string(kBruteForceMaxAtoms) +
                              "); use extremizer_lower_bound and rhs_integral instead");
  }
  detail::require(g.size() == n, "brute_force_sup: g needs exactly one piece per leaf");
  const double atom = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    detail::require(std::abs(tree.leaf_measure(i) - atom) <= 1e-12,
                    "brute_force_sup: tree leaves must be uniform");
    detail::require(std::abs(g.piece(i).length - atom) <= 1e-12,
                    "brute_force_sup: g must have equal pieces matching the leaves");
  }

  std::vector<double> values;
  for (const Piece& p : g.pieces()) values.push_back(p.value);
  std::sort(values.begin(), values.end());
  std::vector<double> heads = values;
  heads.erase(std::unique(heads.begin(), heads.end()), heads.end());

  auto shared = std::make_shared<const ProbTree>(tree);
  auto run_block = [&](std::size_t b) {
    std::vector<double> rest = values;
    rest.erase(std::find(rest.begin(), rest.end(), heads[b]));
    return search_block(shared, std::move(rest), heads[b], spec, k);
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<BlockBest> blocks(heads.size());
  for (std::size_t first = 0; first < heads.size(); first += workers) {
    std::size_t last = std::min(heads.size(), first + workers);
    std::vector<std::future<BlockBest>> pending;
    for (std::size_t b = first + 1; b < last; ++b) {
      pending.push_back(std::async(std::launch::async, run_block, b));
    }
    blocks[first] = run_block(first);
    for (std::size_t b = first + 1; b < last; ++b) blocks[b] = pending[b - first - 1].get();
  }

  // Fixed block order with strict comparison keeps the argmax independent of
  // scheduling.
  BruteForceResult result;
  result.value = -1.0;
  for (auto& block : blocks) {
    result.evaluated += block.evaluated;
    if (block.value > result.value) {
      result.value = block.value;
      result.assignment = std::move(block.assignment);
    }
  }
  return result;
}

}  // namespace dyadic
