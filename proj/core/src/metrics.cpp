#include "qed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qed/rng.hpp"

namespace qed {

namespace {

// Pairwise LCA depths over the leaves, rooted at leaf 0's neighbour.
std::vector<int> leaf_depths(const PhyloTree& t) {
  const int n = t.leaf_count();
  const LcaIndex& idx = t.index();
  std::vector<int> d(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int x = idx.depth(idx.lca(i, j));
      d[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)] = x;
      d[static_cast<size_t>(j) * static_cast<size_t>(n) + static_cast<size_t>(i)] = x;
    }
  return d;
}

// 0: ab|cd, 1: ac|bd, 2: ad|bc
inline int split_code(const int* row_a, const int* row_b, const int* row_c, int b, int c, int d) {
  const int ab = std::max(row_a[b], row_c[d]);
  const int ac = std::max(row_a[c], row_b[d]);
  const int ad = std::max(row_a[d], row_b[c]);
  if (ab > ac && ab > ad) return 0;
  return ac > ad ? 1 : 2;
}

void check_pair(const PhyloTree& t1, const PhyloTree& t2) {
  if (t1.leaf_count() != t2.leaf_count())
    throw MetricsError("quartet distance: trees have " + std::to_string(t1.leaf_count()) + " and " +
                       std::to_string(t2.leaf_count()) + " leaves");
  if (t1.leaf_count() < 4) throw MetricsError("quartet distance needs at least 4 leaves");
}

}  // namespace

double quartet_distance_exact(const PhyloTree& t1, const PhyloTree& t2) {
  check_pair(t1, t2);
  const int n = t1.leaf_count();
  const auto d1 = leaf_depths(t1), d2 = leaf_depths(t2);
  const auto row = [n](const std::vector<int>& d, int i) { return d.data() + static_cast<size_t>(i) * static_cast<size_t>(n); };
  std::uint64_t differ = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const int *a1 = row(d1, a), *b1 = row(d1, b), *c1 = row(d1, c);
        const int *a2 = row(d2, a), *b2 = row(d2, b), *c2 = row(d2, c);
        for (int d = c + 1; d < n; ++d)
          differ += split_code(a1, b1, c1, b, c, d) != split_code(a2, b2, c2, b, c, d);
      }
  return static_cast<double>(differ) / static_cast<double>(choose4(static_cast<std::uint64_t>(n)));
}

DistanceEstimate quartet_distance_sampled(const PhyloTree& t1, const PhyloTree& t2, std::int64_t samples,
                                          std::uint64_t seed) {
  check_pair(t1, t2);
  if (samples < 1) throw MetricsError("quartet distance: samples must be >= 1");
  const int n = t1.leaf_count();
  const std::uint64_t total = choose4(static_cast<std::uint64_t>(n));
  Rng rng(seed);
  std::int64_t differ = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const auto q = unrank_4subset(uniform_index(rng, total), n);
    differ += t1.topology(q[0], q[1], q[2], q[3]) != t2.topology(q[0], q[1], q[2], q[3]);
  }
  DistanceEstimate out;
  out.estimate = static_cast<double>(differ) / static_cast<double>(samples);
  out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  return out;
}

EmbeddingParams::EmbeddingParams(double g) : gamma(g) {
  if (!(g > 0.0 && g < 0.5)) throw MetricsError("embedding gamma must lie in (0, 1/2)");
  const double lhs = std::pow(1.0 - 2.0 * g, 8);
  if (!(lhs > std::max({g * g, std::pow(g, 4), std::pow(g, 8)})))
    throw MetricsError("embedding gamma too large: need (1-2g)^8 > max(g^2, g^4, g^8)");
}

std::vector<double> embed_tree(const RootedTree& tree, const EmbeddingParams& params) {
  if (!tree.is_binary()) throw MetricsError("embed_tree: tree is not binary");
  const double g = params.gamma;
  std::vector<double> x(static_cast<size_t>(tree.leaf_count()), 0.0);
  std::function<void(VertexId, double, double, int)> place = [&](VertexId v, double lo, double len, int depth) {
    if (depth > kMaxEmbedDepth) throw MetricsError("embed_tree: depth exceeds " + std::to_string(kMaxEmbedDepth));
    auto ch = tree.children(v);
    if (ch.empty()) {
      x[static_cast<size_t>(v)] = lo + len / 2.0;
      return;
    }
    place(ch[0], lo, g * len, depth + 1);
    place(ch[1], lo + len - g * len, g * len, depth + 1);
  };
  place(tree.root(), 0.0, 1.0, 0);
  return x;
}

int quartet_sign(double xi, double xj, double xk, double xl) {
  const double diffs_pos[4] = {xi - xk, xi - xl, xj - xk, xj - xl};
  const double diffs_neg[2] = {xi - xj, xk - xl};
  double lp = 0.0, ln = 0.0;
  for (double d : diffs_pos) {
    if (d == 0.0) throw MetricsError("quartet_sign: coincident coordinates");
    lp += 2.0 * std::log(std::abs(d));
  }
  for (double d : diffs_neg) {
    if (d == 0.0) throw MetricsError("quartet_sign: coincident coordinates");
    ln += 4.0 * std::log(std::abs(d));
  }
  if (lp == ln) throw MetricsError("quartet_sign: polynomial vanishes");
  return lp > ln ? 1 : -1;
}

std::vector<ShatterSet> shatter_family(int n) {
  if (n < 5) throw MetricsError("shatter_family needs n >= 5");
  std::vector<ShatterSet> out;
  for (LeafId b = 3; b < n; ++b)
    out.push_back({{0, 1, 2, b}, make_quartet(0, b, 1, 2), make_quartet(1, b, 0, 2)});
  return out;
}

PhyloTree witness_tree(int n, const std::vector<bool>& g) {
  if (n < 5) throw MetricsError("witness_tree needs n >= 5");
  if (static_cast<int>(g.size()) != n - 3) throw MetricsError("witness_tree: labeling must have n-3 entries");
  // Star on {0,1,2} around `centre`; each b subdivides the pendant edge of leaf 0 or leaf 1.
  std::vector<std::pair<VertexId, VertexId>> edges;
  VertexId next = n;
  const VertexId centre = next++;
  VertexId attach[2] = {centre, centre};  // vertex currently adjacent to leaf 0 / leaf 1
  edges.emplace_back(2, centre);
  for (LeafId b = 3; b < n; ++b) {
    const int side = g[static_cast<size_t>(b - 3)] ? 1 : 0;
    const VertexId w = next++;
    edges.emplace_back(attach[side], w);
    edges.emplace_back(b, w);
    attach[side] = w;
  }
  edges.emplace_back(0, attach[0]);
  edges.emplace_back(1, attach[1]);
  return PhyloTree(n, edges);
}

}  // namespace qed
