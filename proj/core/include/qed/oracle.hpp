#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "qed/quartet.hpp"
#include "qed/rng.hpp"
#include "qed/tree.hpp"

namespace qed {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Answers quartet queries on a hidden tree. Each answer is the true split with probability p,
// otherwise one of the two other splits uniformly.
class QuartetOracle {
 public:
  QuartetOracle(PhyloTree hidden, double p, std::uint64_t seed,
                std::int64_t budget = std::numeric_limits<std::int64_t>::max());

  Quartet query(LeafId w, LeafId x, LeafId y, LeafId z);

  int leaf_count() const { return hidden_.leaf_count(); }
  double p() const { return p_; }
  std::int64_t queries() const { return count_; }
  const std::vector<std::array<LeafId, 4>>& log() const { return log_; }
  void set_logging(bool on) { logging_ = on; }

 private:
  PhyloTree hidden_;
  double p_;
  Rng rng_;
  std::int64_t budget_;
  std::int64_t count_ = 0;
  bool logging_ = true;
  std::vector<std::array<LeafId, 4>> log_;
};

// Votes per simulated triplet query: 1 when the oracle is exact, else ceil(K ln(n/delta_conf)).
int vote_repetitions(int n, double p, double delta_conf);

struct AdaptiveResult {
  PhyloTree tree;
  LeafId pivot = -1;
  std::int64_t queries = 0;
};

// Random insertion order; each new leaf is placed by a centroid search over the edges of the
// current tree, using quartets that all contain the fixed pivot leaf.
AdaptiveResult adaptive_reconstruct(QuartetOracle& oracle, double delta_conf, std::uint64_t seed);

}  // namespace qed
