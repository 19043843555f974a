#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qed {

// Leaves are the vertices 0..n-1 of every tree; internal vertices follow.
using LeafId = std::int32_t;
using VertexId = std::int32_t;

inline constexpr VertexId kNoVertex = -1;

class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One of the three splits of an ordered 4-tuple (a,b,c,d).
enum class QuartetTopology : std::uint8_t { AB_CD = 0, AC_BD = 1, AD_BC = 2 };

const char* to_string(QuartetTopology t);

// Euler tour + sparse table over a rooted forest given by parent pointers.
class LcaIndex {
 public:
  LcaIndex() = default;
  LcaIndex(VertexId root, const std::vector<std::vector<VertexId>>& children);

  VertexId lca(VertexId u, VertexId v) const;
  int depth(VertexId v) const { return depth_[static_cast<size_t>(v)]; }
  size_t vertex_count() const { return depth_.size(); }

 private:
  std::vector<int> depth_;
  std::vector<int> first_;
  std::vector<VertexId> euler_;
  std::vector<std::vector<int>> table_;  // indices into euler_, minimal depth
  std::vector<int> log2_;
};

// Unrooted leaf-labelled binary tree. Every internal vertex has degree 3.
class PhyloTree {
 public:
  PhyloTree() = default;
  // Leaves are 0..n-1; internal vertices n..n+k-1. Validates the invariants.
  PhyloTree(int leaf_count, const std::vector<std::pair<VertexId, VertexId>>& edges);

  int leaf_count() const { return n_; }
  int vertex_count() const { return static_cast<int>(adj_.size()); }
  bool is_leaf(VertexId v) const { return v < n_; }
  std::span<const VertexId> neighbors(VertexId v) const { return adj_[static_cast<size_t>(v)]; }
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  QuartetTopology topology(LeafId a, LeafId b, LeafId c, LeafId d) const;

  // Rooted at the neighbour of leaf 0; used for O(1) quartet queries.
  const LcaIndex& index() const { return *index_; }

 private:
  int n_ = 0;
  std::vector<std::vector<VertexId>> adj_;
  std::shared_ptr<const LcaIndex> index_;
};

// Rooted tree over vertices 0..V-1 whose leaves are exactly 0..n-1.
class RootedTree {
 public:
  RootedTree() = default;
  RootedTree(int leaf_count, VertexId root, std::vector<VertexId> parent);

  int leaf_count() const { return n_; }
  int vertex_count() const { return static_cast<int>(parent_.size()); }
  VertexId root() const { return root_; }
  VertexId parent(VertexId v) const { return parent_[static_cast<size_t>(v)]; }
  std::span<const VertexId> children(VertexId v) const { return children_[static_cast<size_t>(v)]; }
  bool is_leaf(VertexId v) const { return children_[static_cast<size_t>(v)].empty(); }
  int depth(VertexId v) const { return index_.depth(v); }
  int subtree_leaf_count(VertexId v) const { return leaf_hi_[static_cast<size_t>(v)] - leaf_lo_[static_cast<size_t>(v)]; }
  bool is_binary() const;

  VertexId lca(VertexId u, VertexId v) const;
  bool is_ancestor(VertexId anc, VertexId v) const;

  // Leaves below v in DFS order.
  std::span<const LeafId> subtree_leaves(VertexId v) const;
  std::span<const VertexId> preorder() const { return preorder_; }

  QuartetTopology topology(LeafId a, LeafId b, LeafId c, LeafId d) const;

  // Forgets the root, suppressing every vertex of degree 2.
  PhyloTree unrooted() const;

 private:
  void check_vertex(VertexId v) const;

  int n_ = 0;
  VertexId root_ = kNoVertex;
  std::vector<VertexId> parent_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<VertexId> preorder_;
  std::vector<LeafId> leaf_order_;
  std::vector<int> leaf_lo_, leaf_hi_;
  LcaIndex index_;
};

// Tree induced on an anchor set U (plus Steiner vertices).
struct SkeletonTree {
  std::vector<VertexId> vertex;           // original vertex ids, preorder
  std::vector<int> parent;                // index into vertex, -1 at the root
  std::vector<std::vector<int>> children; // indices into vertex
  std::vector<bool> anchor;               // vertex[i] is in U

  size_t size() const { return vertex.size(); }
  int index_of(VertexId v) const;
};

QuartetTopology quartet_topology(const PhyloTree& tree, LeafId a, LeafId b, LeafId c, LeafId d);

RootedTree balanced_root(const PhyloTree& tree);

VertexId lca(const RootedTree& tree, VertexId u, VertexId v);

// |leaves(T_lca(u,v)) ∩ active| / |active|, active given as a membership mask over leaves.
double subtree_fraction(const RootedTree& tree, VertexId u, VertexId v, const std::vector<bool>& active);

SkeletonTree skeleton(const RootedTree& tree, const std::vector<VertexId>& anchors);

// phi_U for every leaf: the first vertex of U on the path to the root.
std::vector<VertexId> phi_partition(const RootedTree& tree, const std::vector<VertexId>& anchors);
// Same map extended to every vertex of the tree.
std::vector<VertexId> phi_vertices(const RootedTree& tree, const std::vector<VertexId>& anchors);

PhyloTree random_tree(int n, std::uint64_t seed);

// Empty string when every PhyloTree invariant holds, otherwise a description.
std::string check_invariants(const PhyloTree& tree);

}  // namespace qed
