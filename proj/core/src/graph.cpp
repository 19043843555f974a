#include "qed/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "qed/rng.hpp"

namespace qed {

LeafGraph::LeafGraph(int n, std::vector<bool> active, std::vector<GraphEdge> edges)
    : n_(n), active_(std::move(active)), edges_(std::move(edges)) {
  if (static_cast<int>(active_.size()) != n_) throw std::invalid_argument("active mask size differs from n");
  active_count_ = static_cast<int>(std::count(active_.begin(), active_.end(), true));
}

std::vector<LeafId> LeafGraph::active_leaves() const {
  std::vector<LeafId> out;
  out.reserve(static_cast<size_t>(active_count_));
  for (LeafId x = 0; x < n_; ++x)
    if (active_[static_cast<size_t>(x)]) out.push_back(x);
  return out;
}

LeafGraph build_graph(const QuartetSample& sample, std::uint64_t seed) {
  if (sample.n <= 0) throw std::invalid_argument("build_graph: empty leaf set");
  Rng rng(seed);
  std::vector<GraphEdge> edges;
  edges.reserve(sample.size());
  for (const auto& q : sample.quartets) {
    if (rng() >> 63) edges.push_back({q.c, q.d, q});
    else edges.push_back({q.a, q.b, q});
  }
  return LeafGraph(sample.n, std::vector<bool>(static_cast<size_t>(sample.n), true), std::move(edges));
}

LeafGraph restrict(const LeafGraph& graph, const std::vector<bool>& active) {
  if (static_cast<int>(active.size()) != graph.leaf_count()) throw std::invalid_argument("restrict: mask size differs from n");
  std::vector<bool> next(active.size());
  for (size_t i = 0; i < active.size(); ++i) next[i] = active[i] && graph.active()[i];
  if (std::none_of(next.begin(), next.end(), [](bool b) { return b; }))
    throw std::invalid_argument("restrict: empty active set");
  auto in = [&](LeafId x) { return next[static_cast<size_t>(x)]; };
  std::vector<GraphEdge> kept;
  for (const auto& e : graph.edges())
    if (in(e.source.a) && in(e.source.b) && in(e.source.c) && in(e.source.d)) kept.push_back(e);
  return LeafGraph(graph.leaf_count(), std::move(next), std::move(kept));
}

RhoBounds rho_bounds(double x, double c_over_n, double eta, double err) {
  const double clean = 1.0 - 1.5 * eta;
  return {c_over_n * ((1.0 - 2.0 * x + x * x) * clean + eta / 2.0 - err),
          c_over_n * ((1.0 - 2.0 * x + 2.0 * x * x) * clean + eta / 2.0 + err)};
}

double cross_root_upper(double alpha, double beta, double c_over_n, double eta) {
  return c_over_n * ((1.0 - 2.0 * alpha * beta) * (1.0 - 1.5 * eta) + eta / 2.0);
}

std::vector<std::vector<int>> multiplicity_matrix(const LeafGraph& graph) {
  std::vector<int> pos(static_cast<size_t>(graph.leaf_count()), -1);
  int k = 0;
  for (LeafId x : graph.active_leaves()) pos[static_cast<size_t>(x)] = k++;
  std::vector<std::vector<int>> m(static_cast<size_t>(k), std::vector<int>(static_cast<size_t>(k), 0));
  for (const auto& e : graph.edges()) {
    const int i = pos[static_cast<size_t>(e.u)], j = pos[static_cast<size_t>(e.v)];
    if (i < 0 || j < 0) continue;
    ++m[static_cast<size_t>(i)][static_cast<size_t>(j)];
    ++m[static_cast<size_t>(j)][static_cast<size_t>(i)];
  }
  return m;
}

void write_graph_tsv(std::ostream& out, const LeafGraph& graph) {
  for (const auto& e : graph.edges())
    out << e.u << '\t' << e.v << '\t' << e.source.a << '\t' << e.source.b << '\t' << e.source.c << '\t' << e.source.d << '\n';
}

}  // namespace qed
