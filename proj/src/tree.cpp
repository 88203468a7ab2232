#include "dyadic/tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyadic/errors.hpp"
#include "dyadic/numeric.hpp"

namespace dyadic {

namespace {

constexpr double kMeasureRelTol = 1e-12;
constexpr std::size_t kNotALeaf = static_cast<std::size_t>(-1);

// Dyadic rationals with at most 40 fractional bits add exactly in double
// precision, so their balance can be checked with ==.
bool is_short_dyadic(double x) {
  const double scaled = std::ldexp(x, 40);
  return std::isfinite(scaled) && scaled == std::floor(scaled) && std::abs(scaled) < 0x1p52;
}

}  // namespace

ProbTree ProbTree::uniform(std::size_t arity, std::size_t depth) {
  detail::require(arity >= 2, "uniform tree: arity must be >= 2");
  detail::require(depth >= 1, "uniform tree: depth must be >= 1");
  double leaves = std::pow(static_cast<double>(arity), static_cast<double>(depth));
  detail::require(leaves <= 1e7, "uniform tree: too many leaves");

  TreeBuilder builder;
  std::vector<NodeId> frontier{builder.root()};
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<NodeId> next;
    next.reserve(frontier.size() * arity);
    for (NodeId id : frontier) {
      auto kids = builder.split_uniform(id, arity);
      next.insert(next.end(), kids.begin(), kids.end());
    }
    frontier = std::move(next);
  }
  return std::move(builder).build();
}

std::size_t ProbTree::leaf_index(NodeId id) const {
  std::size_t slot = leaf_slot_.at(id);
  detail::require(slot != kNotALeaf, "node is not a leaf");
  return slot;
}

TreeBuilder::TreeBuilder() { tree_.nodes_.push_back(TreeNode{1.0, kNoParent, {}}); }

std::vector<NodeId> TreeBuilder::split(NodeId parent, std::span<const double> measures) {
  auto& nodes = tree_.nodes_;
  detail::require(parent < nodes.size(), "split: unknown node id");
  detail::require(nodes[parent].is_leaf(), "split: node already has children");
  detail::require(measures.size() >= 2, "split: every internal node needs at least two children");
  for (double m : measures) {
    detail::require(std::isfinite(m) && m > 0.0, "split: child measures must be positive");
  }

  std::vector<NodeId> ids;
  ids.reserve(measures.size());
  for (double m : measures) {
    NodeId id = nodes.size();
    nodes.push_back(TreeNode{m, parent, {}});
    ids.push_back(id);
  }
  nodes[parent].children = ids;
  return ids;
}

std::vector<NodeId> TreeBuilder::split_uniform(NodeId parent, std::size_t arity) {
  detail::require(arity >= 2, "split_uniform: arity must be >= 2");
  std::vector<double> measures(arity, measure(parent) / static_cast<double>(arity));
  return split(parent, measures);
}

ProbTree TreeBuilder::build() && {
  auto& nodes = tree_.nodes_;
  detail::require(!nodes[0].is_leaf(), "tree must have depth >= 1 (root needs children)");

  for (NodeId id = 0; id < nodes.size(); ++id) {
    const TreeNode& node = nodes[id];
    if (node.is_leaf()) continue;
    bool exact = is_short_dyadic(node.measure);
    CompensatedSum sum;
    for (NodeId child : node.children) {
      sum.add(nodes[child].measure);
      exact = exact && is_short_dyadic(nodes[child].measure);
    }
    double total = sum.value();
    bool balanced = exact ? total == node.measure
                          : std::abs(total - node.measure) <= kMeasureRelTol * node.measure;
    if (!balanced) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "children measures of node " << id << " sum to " << total << ", expected "
          << node.measure;
      detail::fail_precondition(msg.str());
    }
  }

  // Depth-first leaf numbering, left to right.
  tree_.leaf_slot_.assign(nodes.size(), kNotALeaf);
  std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, level] = stack.back();
    stack.pop_back();
    tree_.depth_ = std::max(tree_.depth_, level);
    const auto& kids = nodes[id].children;
    if (kids.empty()) {
      tree_.leaf_slot_[id] = tree_.leaves_.size();
      tree_.leaves_.push_back(id);
      continue;
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, level + 1);
  }
  return std::move(tree_);
}

AtomFunction::AtomFunction(std::shared_ptr<const ProbTree> tree, std::vector<double> values)
    : tree_(std::move(tree)), values_(std::move(values)) {
  detail::require(tree_ != nullptr, "AtomFunction: null tree");
  detail::require(values_.size() == tree_->leaf_count(),
                  "AtomFunction: need exactly one value per leaf");
  for (double v : values_) {
    detail::require(std::isfinite(v) && v >= 0.0, "AtomFunction: values must be finite and >= 0");
  }
}

double AtomFunction::moment(double q) const {
  CompensatedSum sum;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double v = values_[i];
    double term = q == 1.0 ? v : std::pow(v, q);
    sum.add(tree_->leaf_measure(i) * term);
  }
  return sum.value();
}

AtomFunction AtomFunction::scaled(double factor) const {
  detail::require(factor >= 0.0, "AtomFunction::scaled: factor must be >= 0");
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return AtomFunction(tree_, std::move(out));
}

bool lives_on(const AtomFunction& phi, const ProbTree& tree) {
  return &phi.tree() == &tree || phi.tree() == tree;
}

}  // namespace dyadic
