#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qed/newick.hpp"
#include "qed/tree.hpp"

namespace qedtest {

// Rooted tree from Newick text where internal vertices may carry names. Leaves get ids by
// natural label order; internal vertices get n, n+1, ... in preorder.
struct NamedRooted {
  qed::RootedTree tree;
  std::map<std::string, qed::VertexId> id;
};

inline NamedRooted rooted_from_newick(const std::string& text) {
  struct N {
    std::string name;
    std::vector<int> kids;
  };
  std::vector<N> nodes;
  size_t pos = 0;
  auto name = [&] {
    std::string s;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) s += text[pos++];
    return s;
  };
  auto parse = [&](auto&& self) -> int {
    int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (text[pos] == '(') {
      ++pos;
      while (true) {
        int c = self(self);
        nodes[static_cast<size_t>(id)].kids.push_back(c);
        if (text[pos] == ',') { ++pos; continue; }
        if (text[pos] == ')') { ++pos; break; }
        throw std::runtime_error("bad test newick");
      }
    }
    nodes[static_cast<size_t>(id)].name = name();
    return id;
  };
  parse(parse);
  std::vector<std::string> leaves;
  for (auto& nd : nodes)
    if (nd.kids.empty()) leaves.push_back(nd.name);
  std::sort(leaves.begin(), leaves.end(), [](auto& a, auto& b) { return qed::natural_less(a, b); });
  NamedRooted out;
  const int n = static_cast<int>(leaves.size());
  std::vector<qed::VertexId> vid(nodes.size());
  qed::VertexId next = n;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kids.empty())
      vid[i] = static_cast<qed::VertexId>(std::find(leaves.begin(), leaves.end(), nodes[i].name) - leaves.begin());
    else
      vid[i] = next++;
    if (!nodes[i].name.empty()) out.id[nodes[i].name] = vid[i];
  }
  std::vector<qed::VertexId> parent(nodes.size(), qed::kNoVertex);
  for (size_t i = 0; i < nodes.size(); ++i)
    for (int k : nodes[i].kids) parent[static_cast<size_t>(vid[static_cast<size_t>(k)])] = vid[i];
  out.tree = qed::RootedTree(n, vid[0], parent);
  return out;
}

// Path between two vertices by BFS on the adjacency.
inline std::vector<qed::VertexId> naive_path(const qed::PhyloTree& t, qed::VertexId a, qed::VertexId b) {
  std::vector<qed::VertexId> prev(static_cast<size_t>(t.vertex_count()), qed::kNoVertex);
  std::queue<qed::VertexId> q;
  q.push(a);
  prev[static_cast<size_t>(a)] = a;
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (auto w : t.neighbors(v))
      if (prev[static_cast<size_t>(w)] == qed::kNoVertex) {
        prev[static_cast<size_t>(w)] = v;
        q.push(w);
      }
  }
  std::vector<qed::VertexId> path{b};
  while (path.back() != a) path.push_back(prev[static_cast<size_t>(path.back())]);
  return path;
}

inline bool disjoint_paths(const qed::PhyloTree& t, qed::VertexId a, qed::VertexId b, qed::VertexId c, qed::VertexId d) {
  auto p1 = naive_path(t, a, b);
  auto p2 = naive_path(t, c, d);
  std::set<qed::VertexId> s(p1.begin(), p1.end());
  return std::none_of(p2.begin(), p2.end(), [&](auto v) { return s.count(v) > 0; });
}

// Topology by explicit path-disjointness; independent of the LCA machinery.
inline qed::QuartetTopology naive_topology(const qed::PhyloTree& t, int a, int b, int c, int d) {
  if (disjoint_paths(t, a, b, c, d)) return qed::QuartetTopology::AB_CD;
  if (disjoint_paths(t, a, c, b, d)) return qed::QuartetTopology::AC_BD;
  if (disjoint_paths(t, a, d, b, c)) return qed::QuartetTopology::AD_BC;
  throw std::logic_error("no disjoint split");
}

// Caterpillar on leaves 0..n-1 in path order.
inline qed::PhyloTree caterpillar(int n) {
  std::vector<std::pair<qed::VertexId, qed::VertexId>> e;
  // spine vertices n..2n-3
  e.emplace_back(0, n);
  e.emplace_back(1, n);
  for (int i = 2; i < n - 1; ++i) {
    e.emplace_back(n + i - 2, n + i - 1);
    e.emplace_back(i, n + i - 1);
  }
  e.emplace_back(n - 1, 2 * n - 3);
  return qed::PhyloTree(n, e);
}

// Perfectly balanced tree on 2^k leaves in order.
inline qed::PhyloTree balanced(int n) {
  std::string s;
  auto rec = [&](auto&& self, int lo, int hi) -> std::string {
    if (hi - lo == 1) return "t" + std::to_string(lo);
    int mid = (lo + hi) / 2;
    return "(" + self(self, lo, mid) + "," + self(self, mid, hi) + ")";
  };
  return qed::parse_newick(rec(rec, 0, n) + ";").tree;
}

inline const char* kFig1 =
    "((((l1,l2)e,(l3,l4)f)u1,(l5,l6)c)a,(((l7,l8)g,(l9,l10)h)u2,(l11,l12)d)b)r;";
inline const char* kFig5 = "(v3,(v4,(v1,v2)),(v6,(v5,v7)));";

}  // namespace qedtest
