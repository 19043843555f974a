#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "qed/quartet.hpp"

namespace qed {

struct GraphEdge {
  LeafId u, v;     // u < v, the chosen pair of `source`
  Quartet source;  // originating quartet
};

// Random leaf graph: one edge per quartet, restricted to an active leaf set.
class LeafGraph {
 public:
  LeafGraph() = default;
  LeafGraph(int n, std::vector<bool> active, std::vector<GraphEdge> edges);

  int leaf_count() const { return n_; }
  const std::vector<bool>& active() const { return active_; }
  bool is_active(LeafId x) const { return active_[static_cast<size_t>(x)]; }
  int active_count() const { return active_count_; }
  std::vector<LeafId> active_leaves() const;
  double gamma() const { return static_cast<double>(active_count_) / n_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }

 private:
  int n_ = 0;
  std::vector<bool> active_;
  int active_count_ = 0;
  std::vector<GraphEdge> edges_;
};

// Each quartet ab|cd contributes {a,b} or {c,d} with probability 1/2 each.
LeafGraph build_graph(const QuartetSample& sample, std::uint64_t seed);

// Keeps the edges whose originating quartet lies inside graph.active() ∩ active.
LeafGraph restrict(const LeafGraph& graph, const std::vector<bool>& active);

struct RhoBounds {
  double lower, upper;
};

// c_over_n is the edge-rate scale c/n; with c = gamma^2 c'/4 this is gamma^2 c' / (4n).
RhoBounds rho_bounds(double x, double c_over_n, double eta, double err = 0.0);

// Upper bound on the edge rate of a pair split by the root with side fractions alpha, beta.
double cross_root_upper(double alpha, double beta, double c_over_n, double eta);

// Edge counts between active leaves, indexed by position in active_leaves().
std::vector<std::vector<int>> multiplicity_matrix(const LeafGraph& graph);

// "u v qa qb qc qd" rows.
void write_graph_tsv(std::ostream& out, const LeafGraph& graph);

}  // namespace qed
