#include "dyadic/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <string>

#include "dyadic/errors.hpp"

namespace dyadic {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DYADIC_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return kDefaultSeed;
}

FuzzCorpus::FuzzCorpus(std::uint64_t seed, FuzzShape shape) : rng_(seed), shape_(shape) {
  detail::require(shape_.max_depth >= 1, "fuzz: max_depth must be >= 1");
  detail::require(shape_.min_arity >= 2 && shape_.max_arity >= shape_.min_arity,
                  "fuzz: need 2 <= min_arity <= max_arity");
  detail::require(shape_.min_value > 0.0 && shape_.max_value >= shape_.min_value,
                  "fuzz: need 0 < min_value <= max_value");
  detail::require(shape_.min_pieces >= 1 && shape_.max_pieces >= shape_.min_pieces,
                  "fuzz: need 1 <= min_pieces <= max_pieces");
}

double FuzzCorpus::uniform() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }

std::size_t FuzzCorpus::uniform_int(std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1));
}

double FuzzCorpus::log_uniform(double lo, double hi) {
  return std::exp(std::log(lo) + uniform() * (std::log(hi) - std::log(lo)));
}

std::vector<double> FuzzCorpus::split_weights(std::size_t count) {
  std::vector<double> w(count);
  double total = 0.0;
  for (double& x : w) {
    x = 0.25 + uniform();
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

TreeInstance FuzzCorpus::next_tree_instance() {
  const std::size_t depth = uniform_int(1, shape_.max_depth);
  TreeBuilder builder;
  std::deque<std::pair<NodeId, std::size_t>> open{{builder.root(), 0}};
  while (!open.empty()) {
    auto [id, level] = open.front();
    open.pop_front();
    if (level >= depth) continue;
    if (level > 0 && !(uniform() < shape_.split_probability)) continue;
    std::size_t arity = uniform_int(shape_.min_arity, shape_.max_arity);
    auto weights = split_weights(arity);
    double parent = builder.measure(id);
    for (double& w : weights) w *= parent;
    for (NodeId child : builder.split(id, weights)) open.emplace_back(child, level + 1);
  }
  auto tree = std::make_shared<const ProbTree>(std::move(builder).build());
  std::vector<double> values(tree->leaf_count());
  for (double& v : values) v = log_uniform(shape_.min_value, shape_.max_value);
  AtomFunction phi(tree, std::move(values));
  return TreeInstance{std::move(tree), std::move(phi)};
}

StepFunction FuzzCorpus::next_step_function() {
  const std::size_t n = uniform_int(shape_.min_pieces, shape_.max_pieces);
  auto lengths = split_weights(n);
  std::vector<double> values(n);
  for (double& v : values) v = log_uniform(shape_.min_value, shape_.max_value);
  std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<Piece> pieces(n);
  for (std::size_t i = 0; i < n; ++i) pieces[i] = Piece{lengths[i], values[i]};
  return StepFunction(std::move(pieces));
}

std::vector<TreeInstance> fuzz_tree_instances(std::uint64_t seed, std::size_t count,
                                              const FuzzShape& shape) {
  detail::require(count >= 1, "fuzz: count must be >= 1");
  FuzzCorpus corpus(seed, shape);
  std::vector<TreeInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(corpus.next_tree_instance());
  return out;
}

std::vector<StepFunction> fuzz_step_functions(std::uint64_t seed, std::size_t count,
                                              const FuzzShape& shape) {
  detail::require(count >= 1, "fuzz: count must be >= 1");
  FuzzCorpus corpus(seed, shape);
  std::vector<StepFunction> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(corpus.next_step_function());
  return out;
}

namespace {

class Fnv1a {
 public:
  void add(const std::string& s) {
    for (unsigned char ch : s) {
      hash_ ^= ch;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g;", x);
    add(std::string(buf));
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t fingerprint(const TreeInstance& instance) {
  Fnv1a h;
  for (const TreeNode& node : instance.tree->nodes()) {
    h.add(node.measure);
    h.add(std::to_string(node.children.size()) + "|");
  }
  for (double v : instance.phi.values()) h.add(v);
  return h.value();
}

std::uint64_t fingerprint(const StepFunction& g) {
  Fnv1a h;
  for (const Piece& p : g.pieces()) {
    h.add(p.length);
    h.add(p.value);
  }
  return h.value();
}

}  // namespace dyadic
