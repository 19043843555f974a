#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qed/clustering.hpp"
#include "qed/tree.hpp"

namespace qed {

class ReconstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Skeleton over anchor labels: 0 is the root r, 1..k_L the left anchors, k_L+1..k_L+k_R the right
// anchors. Steiner vertices carry labels from |U| upwards. Vertex 0 of the skeleton is r.
struct SkeletonShape {
  SkeletonTree tree;
  int k_left = 0, k_right = 0;
  std::uint64_t hash = 0;
  std::string canonical;  // nested form, e.g. "0(1(2),3)"; Steiner vertices print as "*"
};

// Distinct shapes with r at the root, left anchors below one child of r and right anchors below
// the other. Ordered by vertex count, then hash. Exhaustive when |U| <= 6; larger anchor sets are
// sampled with `seed` until `budget` distinct shapes or the attempt cap is reached.
std::vector<SkeletonShape> enumerate_skeletons(int k_left, int k_right, int budget, std::uint64_t seed);

// Number of shapes on a side with k labelled anchors.
std::uint64_t side_shape_count(int k);

struct Provenance {
  int repetition = -1;
  int guess = -1;
  int rho_left = 0;
  int skeleton = -1;  // position in the enumeration
  std::uint64_t skeleton_hash = 0;
  std::string skeleton_shape;
  int duplicates = 0;  // leaves in both a left and a right cluster
  std::uint64_t seed = 0;

  std::uint64_t hash() const;
};

struct CandidateTree {
  PhyloTree tree;
  Provenance provenance;
  double risk = std::numeric_limits<double>::quiet_NaN();
};

// Attaches a balanced tree over each cluster (sorted ids) as the rightmost child of its anchor and
// the leftover set at r. An anchor left with three children gets a new left child holding the two
// inherited ones. A leaf in both a left and a right cluster stays on the side of the smaller
// cluster, the left one on ties.
CandidateTree attach_clusters(const SkeletonShape& skeleton, const ClusterOutput& clusters, int n);

}  // namespace qed
