#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qed/quartet.hpp"
#include "qed/tree.hpp"

namespace qed {

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fraction of the C(n,4) leaf quadruples on which the two trees induce different splits.
double quartet_distance_exact(const PhyloTree& t1, const PhyloTree& t2);

struct DistanceEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

// Monte Carlo over uniform 4-subsets, with the binomial standard error.
DistanceEstimate quartet_distance_sampled(const PhyloTree& t1, const PhyloTree& t2, std::int64_t samples,
                                          std::uint64_t seed);

// Interval embedding of the leaves of a rooted binary tree into [0,1].
struct EmbeddingParams {
  double gamma = 1.0 / 16.0;

  explicit EmbeddingParams(double g = 1.0 / 16.0);
};

inline constexpr int kMaxEmbedDepth = 50;

// Leaves whose LCA sits at depth l (root depth 0) end up between (1-2g)g^l and g^l apart.
std::vector<double> embed_tree(const RootedTree& tree, const EmbeddingParams& params = EmbeddingParams());

// Sign of ((xi-xk)(xi-xl)(xj-xk)(xj-xl))^2 - ((xi-xj)(xk-xl))^4: +1 when ij|kl holds, -1 otherwise.
// Throws MetricsError on coincident coordinates or an exact tie.
int quartet_sign(double xi, double xj, double xk, double xl);

// Shattered family on A = {0,1,2}: q_b = A + {b} for b = 3..n-1, labelled 0b|12 or 1b|02.
struct ShatterSet {
  std::array<LeafId, 4> leaves;  // sorted
  Quartet label0, label1;
};

std::vector<ShatterSet> shatter_family(int n);

// Tree realizing label_{g[b-3]} on every q_b: b hangs beside leaf 0 or leaf 1.
PhyloTree witness_tree(int n, const std::vector<bool>& g);

}  // namespace qed
