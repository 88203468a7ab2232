#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace dyadic {

using NodeId = std::size_t;
inline constexpr NodeId kNoParent = static_cast<NodeId>(-1);

/// A node of a finite-depth tree of measurable sets. Leaves are atoms.
struct TreeNode {
  double measure = 0.0;
  NodeId parent = kNoParent;
  std::vector<NodeId> children;

  bool is_leaf() const { return children.empty(); }
  bool operator==(const TreeNode&) const = default;
};

/// Finite truncation of a tree on a probability space: the root has measure 1,
/// every internal node has at least two children whose measures add up to the
/// parent's, and the leaves form a partition of the space into atoms.
///
/// Nodes are stored so that a parent always precedes its children; a reverse
/// scan over `nodes()` is therefore a valid bottom-up order. Leaves are
/// numbered left to right (depth-first order).
class ProbTree {
 public:
  /// Uniform `arity`-ary tree of the given depth (depth >= 1, arity >= 2).
  static ProbTree uniform(std::size_t arity, std::size_t depth);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(NodeId id) const { return nodes_.at(id); }
  NodeId root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }

  std::size_t leaf_count() const { return leaves_.size(); }
  /// Node ids of the leaves, in leaf-index order.
  std::span<const NodeId> leaves() const { return leaves_; }
  double leaf_measure(std::size_t leaf_index) const {
    return nodes_[leaves_.at(leaf_index)].measure;
  }
  /// Leaf index of a leaf node id.
  std::size_t leaf_index(NodeId id) const;

  std::size_t depth() const { return depth_; }

  bool operator==(const ProbTree& other) const { return nodes_ == other.nodes_; }

 private:
  friend class TreeBuilder;
  ProbTree() = default;

  std::vector<TreeNode> nodes_;
  std::vector<NodeId> leaves_;
  std::vector<std::size_t> leaf_slot_;  // node id -> leaf index (or npos)
  std::size_t depth_ = 0;
};

/// Incremental construction of a ProbTree from explicit measure splits.
///
///   TreeBuilder b;
///   auto kids = b.split(b.root(), {0.6, 0.4});
///   ProbTree t = std::move(b).build();
///
/// `split` checks positivity and the child count immediately; the measure
/// balance of every node is checked in `build`.
class TreeBuilder {
 public:
  TreeBuilder();

  NodeId root() const { return 0; }

  /// Attach children with the given absolute measures to a current leaf.
  std::vector<NodeId> split(NodeId parent, std::span<const double> measures);
  std::vector<NodeId> split(NodeId parent, std::initializer_list<double> measures) {
    return split(parent, std::span<const double>(measures.begin(), measures.size()));
  }
  /// Split a node into `arity` children of equal measure.
  std::vector<NodeId> split_uniform(NodeId parent, std::size_t arity);

  double measure(NodeId id) const { return tree_.nodes_.at(id).measure; }

  /// Validate and freeze. Throws PreconditionError on any violated tree axiom.
  ProbTree build() &&;

 private:
  ProbTree tree_;
};

/// Nonnegative simple function: one value per leaf atom of a tree.
class AtomFunction {
 public:
  AtomFunction(std::shared_ptr<const ProbTree> tree, std::vector<double> values);

  const ProbTree& tree() const { return *tree_; }
  const std::shared_ptr<const ProbTree>& tree_ptr() const { return tree_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t leaf) const { return values_[leaf]; }
  std::size_t size() const { return values_.size(); }

  /// Sum over atoms of measure * value^q.
  double moment(double q) const;
  double integral() const { return moment(1.0); }

  /// Pointwise scaling by a nonnegative constant.
  AtomFunction scaled(double factor) const;

 private:
  std::shared_ptr<const ProbTree> tree_;
  std::vector<double> values_;
};

/// True when `phi` is defined on `tree` (same object or structurally equal).
bool lives_on(const AtomFunction& phi, const ProbTree& tree);

}  // namespace dyadic
