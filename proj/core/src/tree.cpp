#include "qed/tree.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qed/rng.hpp"

namespace qed {

const char* to_string(QuartetTopology t) {
  switch (t) {
    case QuartetTopology::AB_CD: return "ab|cd";
    case QuartetTopology::AC_BD: return "ac|bd";
    case QuartetTopology::AD_BC: return "ad|bc";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// LcaIndex

LcaIndex::LcaIndex(VertexId root, const std::vector<std::vector<VertexId>>& children) {
  const size_t nv = children.size();
  depth_.assign(nv, -1);
  first_.assign(nv, -1);
  euler_.reserve(2 * nv);

  // Iterative DFS producing the Euler tour.
  std::vector<std::pair<VertexId, size_t>> stack;
  stack.emplace_back(root, 0);
  depth_[static_cast<size_t>(root)] = 0;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto vs = static_cast<size_t>(v);
    if (next == 0) first_[vs] = static_cast<int>(euler_.size());
    euler_.push_back(v);
    if (next < children[vs].size()) {
      VertexId c = children[vs][next++];
      depth_[static_cast<size_t>(c)] = depth_[vs] + 1;
      stack.emplace_back(c, 0);
    } else {
      stack.pop_back();
    }
  }

  const size_t m = euler_.size();
  log2_.assign(m + 1, 0);
  for (size_t i = 2; i <= m; ++i) log2_[i] = log2_[i / 2] + 1;
  const int levels = log2_[m] + 1;
  table_.assign(static_cast<size_t>(levels), std::vector<int>(m));
  for (size_t i = 0; i < m; ++i) table_[0][i] = static_cast<int>(i);
  for (int k = 1; k < levels; ++k) {
    const size_t half = size_t{1} << (k - 1);
    for (size_t i = 0; i + (size_t{1} << k) <= m; ++i) {
      int a = table_[static_cast<size_t>(k - 1)][i];
      int b = table_[static_cast<size_t>(k - 1)][i + half];
      table_[static_cast<size_t>(k)][i] =
          depth_[static_cast<size_t>(euler_[static_cast<size_t>(a)])] <=
                  depth_[static_cast<size_t>(euler_[static_cast<size_t>(b)])]
              ? a
              : b;
    }
  }
}

VertexId LcaIndex::lca(VertexId u, VertexId v) const {
  int l = first_[static_cast<size_t>(u)];
  int r = first_[static_cast<size_t>(v)];
  if (l > r) std::swap(l, r);
  const int k = log2_[static_cast<size_t>(r - l + 1)];
  int a = table_[static_cast<size_t>(k)][static_cast<size_t>(l)];
  int b = table_[static_cast<size_t>(k)][static_cast<size_t>(r - (1 << k) + 1)];
  VertexId va = euler_[static_cast<size_t>(a)];
  VertexId vb = euler_[static_cast<size_t>(b)];
  return depth_[static_cast<size_t>(va)] <= depth_[static_cast<size_t>(vb)] ? va : vb;
}

namespace {

// Deepest pairwise LCA decides the split; ties only occur between the two pairs of one split.
template <typename DepthOfLca>
QuartetTopology topology_from_depths(DepthOfLca&& d, LeafId a, LeafId b, LeafId c, LeafId d4) {
  const int ab = std::max(d(a, b), d(c, d4));
  const int ac = std::max(d(a, c), d(b, d4));
  const int ad = std::max(d(a, d4), d(b, c));
  if (ab > ac && ab > ad) return QuartetTopology::AB_CD;
  if (ac > ad) return QuartetTopology::AC_BD;
  return QuartetTopology::AD_BC;
}

void check_quartet_args(int n, LeafId a, LeafId b, LeafId c, LeafId d) {
  const std::array<LeafId, 4> q{a, b, c, d};
  for (LeafId x : q)
    if (x < 0 || x >= n) throw TreeError("quartet leaf " + std::to_string(x) + " not in tree");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (q[static_cast<size_t>(i)] == q[static_cast<size_t>(j)])
        throw TreeError("quartet has duplicate leaf " + std::to_string(q[static_cast<size_t>(i)]));
}

}  // namespace

// ---------------------------------------------------------------------------
// PhyloTree

PhyloTree::PhyloTree(int leaf_count, const std::vector<std::pair<VertexId, VertexId>>& edges)
    : n_(leaf_count) {
  if (n_ < 3) throw TreeError("a phylogenetic tree needs at least 3 leaves");
  const size_t nv = edges.size() + 1;
  if (nv != static_cast<size_t>(2 * n_ - 2))
    throw TreeError("edge count " + std::to_string(edges.size()) + " does not match a binary tree on " +
                    std::to_string(n_) + " leaves");
  adj_.assign(nv, {});
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<size_t>(u) >= nv || static_cast<size_t>(v) >= nv || u == v)
      throw TreeError("invalid edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    adj_[static_cast<size_t>(u)].push_back(v);
    adj_[static_cast<size_t>(v)].push_back(u);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  for (size_t v = 0; v < nv; ++v) {
    const size_t want = static_cast<int>(v) < n_ ? 1 : 3;
    if (adj_[v].size() != want)
      throw TreeError("vertex " + std::to_string(v) + " has degree " + std::to_string(adj_[v].size()) +
                      ", expected " + std::to_string(want));
  }

  // Root the index at leaf 0's neighbour; connectivity falls out of the traversal.
  const VertexId root = adj_[0][0];
  std::vector<std::vector<VertexId>> children(nv);
  std::vector<bool> seen(nv, false);
  std::vector<VertexId> stack{root};
  seen[static_cast<size_t>(root)] = true;
  size_t visited = 0;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    ++visited;
    for (VertexId w : adj_[static_cast<size_t>(v)]) {
      if (seen[static_cast<size_t>(w)]) continue;
      seen[static_cast<size_t>(w)] = true;
      children[static_cast<size_t>(v)].push_back(w);
      stack.push_back(w);
    }
  }
  if (visited != nv) throw TreeError("tree is not connected");
  index_ = std::make_shared<LcaIndex>(root, children);
}

std::vector<std::pair<VertexId, VertexId>> PhyloTree::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (size_t u = 0; u < adj_.size(); ++u)
    for (VertexId v : adj_[u])
      if (static_cast<VertexId>(u) < v) out.emplace_back(static_cast<VertexId>(u), v);
  return out;
}

QuartetTopology PhyloTree::topology(LeafId a, LeafId b, LeafId c, LeafId d) const {
  const LcaIndex& idx = *index_;
  return topology_from_depths([&](LeafId x, LeafId y) { return idx.depth(idx.lca(x, y)); }, a, b, c, d);
}

QuartetTopology quartet_topology(const PhyloTree& tree, LeafId a, LeafId b, LeafId c, LeafId d) {
  check_quartet_args(tree.leaf_count(), a, b, c, d);
  return tree.topology(a, b, c, d);
}

std::string check_invariants(const PhyloTree& tree) {
  std::ostringstream err;
  const int n = tree.leaf_count();
  if (tree.vertex_count() != 2 * n - 2) err << "vertex count " << tree.vertex_count() << " != 2n-2; ";
  size_t degree_sum = 0;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    const size_t deg = tree.neighbors(v).size();
    degree_sum += deg;
    if (tree.is_leaf(v) && deg != 1) err << "leaf " << v << " has degree " << deg << "; ";
    if (!tree.is_leaf(v) && deg != 3) err << "internal " << v << " has degree " << deg << "; ";
  }
  if (degree_sum != 2 * static_cast<size_t>(tree.vertex_count() - 1)) err << "not a tree (edge count); ";
  // Connectivity + acyclicity: BFS reaches everything with V-1 edges.
  std::vector<bool> seen(static_cast<size_t>(tree.vertex_count()), false);
  std::vector<VertexId> stack{0};
  seen[0] = true;
  int reached = 0;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    ++reached;
    for (VertexId w : tree.neighbors(v))
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = true;
        stack.push_back(w);
      }
  }
  if (reached != tree.vertex_count()) err << "disconnected; ";
  return err.str();
}

// ---------------------------------------------------------------------------
// RootedTree

RootedTree::RootedTree(int leaf_count, VertexId root, std::vector<VertexId> parent)
    : n_(leaf_count), root_(root), parent_(std::move(parent)) {
  const size_t nv = parent_.size();
  if (root_ < 0 || static_cast<size_t>(root_) >= nv) throw TreeError("root out of range");
  if (parent_[static_cast<size_t>(root_)] != kNoVertex) throw TreeError("root has a parent");
  children_.assign(nv, {});
  for (size_t v = 0; v < nv; ++v) {
    if (static_cast<VertexId>(v) == root_) continue;
    VertexId p = parent_[v];
    if (p < 0 || static_cast<size_t>(p) >= nv) throw TreeError("vertex " + std::to_string(v) + " has no valid parent");
    children_[static_cast<size_t>(p)].push_back(static_cast<VertexId>(v));
  }
  for (size_t v = 0; v < nv; ++v) {
    const bool leaf = children_[v].empty();
    if (leaf != (static_cast<int>(v) < n_))
      throw TreeError("vertex " + std::to_string(v) + (leaf ? " is childless but not a leaf id" : " is a leaf id with children"));
  }

  // Preorder + leaf ranges.
  leaf_lo_.assign(nv, 0);
  leaf_hi_.assign(nv, 0);
  preorder_.reserve(nv);
  std::vector<std::pair<VertexId, size_t>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto vs = static_cast<size_t>(v);
    if (next == 0) {
      preorder_.push_back(v);
      leaf_lo_[vs] = static_cast<int>(leaf_order_.size());
      if (children_[vs].empty()) leaf_order_.push_back(v);
    }
    if (next < children_[vs].size()) {
      VertexId c = children_[vs][next++];
      stack.emplace_back(c, 0);
    } else {
      leaf_hi_[vs] = static_cast<int>(leaf_order_.size());
      stack.pop_back();
    }
  }
  if (preorder_.size() != nv) throw TreeError("parent array is not a single rooted tree");
  index_ = LcaIndex(root_, children_);
}

void RootedTree::check_vertex(VertexId v) const {
  if (v < 0 || v >= vertex_count()) throw TreeError("vertex " + std::to_string(v) + " not in tree");
}

bool RootedTree::is_binary() const {
  for (const auto& c : children_)
    if (!c.empty() && c.size() != 2) return false;
  return true;
}

VertexId RootedTree::lca(VertexId u, VertexId v) const { return index_.lca(u, v); }

bool RootedTree::is_ancestor(VertexId anc, VertexId v) const {
  const auto a = static_cast<size_t>(anc);
  const auto b = static_cast<size_t>(v);
  // Leaf ranges are nested for ancestors; internal vertices always own >= 1 leaf.
  return leaf_lo_[a] <= leaf_lo_[b] && leaf_hi_[b] <= leaf_hi_[a] && depth(anc) <= depth(v);
}

std::span<const LeafId> RootedTree::subtree_leaves(VertexId v) const {
  const auto vs = static_cast<size_t>(v);
  return std::span<const LeafId>(leaf_order_).subspan(static_cast<size_t>(leaf_lo_[vs]),
                                                     static_cast<size_t>(leaf_hi_[vs] - leaf_lo_[vs]));
}

QuartetTopology RootedTree::topology(LeafId a, LeafId b, LeafId c, LeafId d) const {
  return topology_from_depths([&](LeafId x, LeafId y) { return index_.depth(index_.lca(x, y)); }, a, b, c, d);
}

PhyloTree RootedTree::unrooted() const {
  const size_t nv = parent_.size();
  // Degree in the unrooted sense; vertices of degree 2 are spliced out.
  // A chain of unary vertices at the top contributes nothing; the tree hangs from its end.
  VertexId top = root_;
  while (children_[static_cast<size_t>(top)].size() == 1) top = children_[static_cast<size_t>(top)][0];
  std::vector<int> degree(nv, 0);
  for (size_t v = 0; v < nv; ++v) {
    degree[v] = static_cast<int>(children_[v].size()) + (static_cast<VertexId>(v) == root_ ? 0 : 1);
  }
  for (VertexId v = root_; v != top; v = children_[static_cast<size_t>(v)][0]) degree[static_cast<size_t>(v)] = 0;
  degree[static_cast<size_t>(top)] = static_cast<int>(children_[static_cast<size_t>(top)].size());
  for (size_t v = 0; v < nv; ++v)
    if (static_cast<int>(v) >= n_ && degree[v] > 3)
      throw TreeError("vertex " + std::to_string(v) + " is multifurcating");

  // Walk down from each kept vertex to the next kept vertex.
  std::vector<VertexId> new_id(nv, kNoVertex);
  VertexId next_internal = n_;
  for (VertexId v : preorder_) {
    const auto vs = static_cast<size_t>(v);
    if (v < n_) new_id[vs] = v;
    else if (degree[vs] == 3) new_id[vs] = next_internal++;
  }
  auto descend = [&](VertexId v) {
    while (new_id[static_cast<size_t>(v)] == kNoVertex) {
      const auto& ch = children_[static_cast<size_t>(v)];
      if (ch.size() != 1) break;
      v = ch[0];
    }
    return v;
  };
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId v : preorder_) {
    const auto vs = static_cast<size_t>(v);
    if (new_id[vs] == kNoVertex) {
      // Suppressed root with two children joins them directly.
      if (v == top && children_[vs].size() == 2) {
        VertexId a = descend(children_[vs][0]);
        VertexId b = descend(children_[vs][1]);
        edges.emplace_back(new_id[static_cast<size_t>(a)], new_id[static_cast<size_t>(b)]);
      }
      continue;
    }
    for (VertexId c : children_[vs]) {
      VertexId w = descend(c);
      edges.emplace_back(new_id[vs], new_id[static_cast<size_t>(w)]);
    }
  }
  return PhyloTree(n_, edges);
}

int SkeletonTree::index_of(VertexId v) const {
  auto it = std::find(vertex.begin(), vertex.end(), v);
  return it == vertex.end() ? -1 : static_cast<int>(it - vertex.begin());
}

// ---------------------------------------------------------------------------
// Free functions

RootedTree balanced_root(const PhyloTree& tree) {
  const int n = tree.leaf_count();
  const int nv = tree.vertex_count();
  const int need = (n + 2) / 3;  // ceil(n/3)

  // DFS from leaf 0, children in increasing id order; postorder leaf counts.
  std::vector<VertexId> parent(static_cast<size_t>(nv), kNoVertex);
  std::vector<VertexId> order;
  order.reserve(static_cast<size_t>(nv));
  std::vector<VertexId> stack{0};
  std::vector<bool> seen(static_cast<size_t>(nv), false);
  seen[0] = true;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    auto nb = tree.neighbors(v);
    for (auto it = nb.rbegin(); it != nb.rend(); ++it) {
      if (seen[static_cast<size_t>(*it)]) continue;
      seen[static_cast<size_t>(*it)] = true;
      parent[static_cast<size_t>(*it)] = v;
      stack.push_back(*it);
    }
  }
  std::vector<int> below(static_cast<size_t>(nv), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId v = *it;
    if (tree.is_leaf(v)) below[static_cast<size_t>(v)] += 1;
    if (parent[static_cast<size_t>(v)] != kNoVertex) below[static_cast<size_t>(parent[static_cast<size_t>(v)])] += below[static_cast<size_t>(v)];
  }
  // Leaf 0 starts the DFS, so its own count is 1 but its "subtree" is everything; skip it.
  VertexId child = kNoVertex;
  for (VertexId v : order) {
    if (v == 0) continue;
    const int s = below[static_cast<size_t>(v)];
    if (std::min(s, n - s) >= need) {
      child = v;
      break;
    }
  }
  if (child == kNoVertex) throw TreeError("no balanced edge found (tree invariant violated)");
  const VertexId other = parent[static_cast<size_t>(child)];

  // Re-orient every edge away from the new root vertex (id nv).
  std::vector<VertexId> rparent(static_cast<size_t>(nv + 1), kNoVertex);
  const VertexId root = nv;
  std::vector<std::pair<VertexId, VertexId>> frontier{{child, root}, {other, root}};
  while (!frontier.empty()) {
    auto [v, p] = frontier.back();
    frontier.pop_back();
    rparent[static_cast<size_t>(v)] = p;
    for (VertexId w : tree.neighbors(v)) {
      if (w == p) continue;
      if ((v == child && w == other) || (v == other && w == child)) continue;
      frontier.emplace_back(w, v);
    }
  }
  // Root children are listed in vertex-id order; either may be called "left".
  return RootedTree(n, root, rparent);
}

VertexId lca(const RootedTree& tree, VertexId u, VertexId v) {
  if (u < 0 || u >= tree.vertex_count() || v < 0 || v >= tree.vertex_count())
    throw TreeError("lca: vertex not in tree");
  return tree.lca(u, v);
}

double subtree_fraction(const RootedTree& tree, VertexId u, VertexId v, const std::vector<bool>& active) {
  const int total = static_cast<int>(std::count(active.begin(), active.end(), true));
  if (total == 0) throw TreeError("subtree_fraction: empty active set");
  int inside = 0;
  for (LeafId x : tree.subtree_leaves(lca(tree, u, v)))
    if (static_cast<size_t>(x) < active.size() && active[static_cast<size_t>(x)]) ++inside;
  return static_cast<double>(inside) / total;
}

SkeletonTree skeleton(const RootedTree& tree, const std::vector<VertexId>& anchors) {
  const auto nv = static_cast<size_t>(tree.vertex_count());
  std::vector<bool> in_u(nv, false);
  for (VertexId u : anchors) {
    if (u < 0 || static_cast<size_t>(u) >= nv) throw TreeError("skeleton: anchor not in tree");
    in_u[static_cast<size_t>(u)] = true;
  }
  if (!in_u[static_cast<size_t>(tree.root())]) throw TreeError("skeleton: anchor set must contain the root");

  // kept_children[v] = number of children whose subtree holds an anchor.
  std::vector<bool> keep(nv, false);
  std::vector<int> kept_children(nv, 0);
  auto pre = tree.preorder();
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    const auto v = static_cast<size_t>(*it);
    if (in_u[v] || kept_children[v] > 0) keep[v] = true;
    if (keep[v] && *it != tree.root()) kept_children[static_cast<size_t>(tree.parent(*it))] += 1;
  }

  SkeletonTree sk;
  std::vector<int> sk_index(nv, -1);
  for (VertexId v : pre) {
    const auto vs = static_cast<size_t>(v);
    if (!keep[vs]) continue;
    if (!in_u[vs] && kept_children[vs] < 2) continue;  // suppressed
    int p = -1;
    for (VertexId a = v; a != tree.root();) {
      a = tree.parent(a);
      if (sk_index[static_cast<size_t>(a)] >= 0) {
        p = sk_index[static_cast<size_t>(a)];
        break;
      }
    }
    sk_index[vs] = static_cast<int>(sk.vertex.size());
    sk.vertex.push_back(v);
    sk.parent.push_back(p);
    sk.children.emplace_back();
    sk.anchor.push_back(in_u[vs]);
    if (p >= 0) sk.children[static_cast<size_t>(p)].push_back(sk_index[vs]);
  }
  return sk;
}

std::vector<VertexId> phi_vertices(const RootedTree& tree, const std::vector<VertexId>& anchors) {
  const auto nv = static_cast<size_t>(tree.vertex_count());
  std::vector<bool> in_u(nv, false);
  for (VertexId u : anchors) {
    if (u < 0 || static_cast<size_t>(u) >= nv) throw TreeError("phi: anchor not in tree");
    in_u[static_cast<size_t>(u)] = true;
  }
  if (!in_u[static_cast<size_t>(tree.root())]) throw TreeError("phi: anchor set must contain the root");
  std::vector<VertexId> phi(nv, kNoVertex);
  for (VertexId v : tree.preorder()) {
    const auto vs = static_cast<size_t>(v);
    phi[vs] = in_u[vs] ? v : phi[static_cast<size_t>(tree.parent(v))];
  }
  return phi;
}

std::vector<VertexId> phi_partition(const RootedTree& tree, const std::vector<VertexId>& anchors) {
  auto phi = phi_vertices(tree, anchors);
  phi.resize(static_cast<size_t>(tree.leaf_count()));
  return phi;
}

PhyloTree random_tree(int n, std::uint64_t seed) {
  if (n < 4) throw TreeError("random_tree needs n >= 4");
  Rng rng(seed);
  std::vector<std::pair<VertexId, VertexId>> edges{{0, n}, {1, n}, {2, n}};
  for (LeafId k = 3; k < n; ++k) {
    const auto e = static_cast<size_t>(uniform_index(rng, edges.size()));
    const VertexId w = n + k - 2;
    auto [x, y] = edges[e];
    edges[e] = {x, w};
    edges.emplace_back(w, y);
    edges.emplace_back(w, k);
  }
  return PhyloTree(n, edges);
}

}  // namespace qed
