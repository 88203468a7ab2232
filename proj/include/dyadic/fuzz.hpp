#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "dyadic/step_function.hpp"
#include "dyadic/tree.hpp"

namespace dyadic {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Seed from the DYADIC_SEED environment variable, else kDefaultSeed.
std::uint64_t default_seed();

struct FuzzShape {
  std::size_t max_depth = 6;
  std::size_t min_arity = 2;
  std::size_t max_arity = 4;
  /// Chance that a non-root node above the chosen depth is split further.
  double split_probability = 0.8;
  double min_value = 1e-3;
  double max_value = 1e3;
  std::size_t min_pieces = 1;
  std::size_t max_pieces = 64;
};

struct TreeInstance {
  std::shared_ptr<const ProbTree> tree;
  AtomFunction phi;
};

/// Deterministic random instances. Only raw 64-bit outputs of mt19937_64 are
/// used (the standard fixes that sequence); the mapping to doubles is done
/// here, so a seed yields the same instances with any standard library.
class FuzzCorpus {
 public:
  explicit FuzzCorpus(std::uint64_t seed, FuzzShape shape = {});

  TreeInstance next_tree_instance();
  StepFunction next_step_function();

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [lo, hi].
  std::size_t uniform_int(std::size_t lo, std::size_t hi);
  double log_uniform(double lo, double hi);

  const FuzzShape& shape() const { return shape_; }

 private:
  std::vector<double> split_weights(std::size_t count);

  std::mt19937_64 rng_;
  FuzzShape shape_;
};

/// `count` (>= 1) tree instances / step functions from one seed.
std::vector<TreeInstance> fuzz_tree_instances(std::uint64_t seed, std::size_t count,
                                              const FuzzShape& shape = {});
std::vector<StepFunction> fuzz_step_functions(std::uint64_t seed, std::size_t count,
                                              const FuzzShape& shape = {});

/// FNV-1a hash of the instance printed to 12 significant digits.
std::uint64_t fingerprint(const TreeInstance& instance);
std::uint64_t fingerprint(const StepFunction& g);

}  // namespace dyadic
