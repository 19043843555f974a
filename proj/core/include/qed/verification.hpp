#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qed/clustering.hpp"
#include "qed/newick.hpp"
#include "qed/quartet.hpp"
#include "qed/reconstruction.hpp"

namespace qed {

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fraction of quartets in `sample` whose claimed split differs from the tree's.
double empirical_risk(const PhyloTree& tree, const QuartetSample& sample);

// Number of violated quartets, or any value above `stop_after` once that many are seen.
std::size_t count_violations(const PhyloTree& tree, const QuartetSample& sample, std::size_t stop_after);

// eta + (3/4) eps (1 - 3 eta / 2)
double acceptance_threshold(double eta, double eps);
bool accept(double risk, double eta, double eps);

struct RiskReport {
  int candidate = -1;
  double risk = 0.0;
  double threshold = 0.0;
  bool accepted = false;
};

struct PipelineConfig {
  double eps = 0.3;
  double eta = 0.0;
  double delta = 0.1;
  int repetitions = 100;
  int skeleton_budget = 2000;
  std::uint64_t seed = 0;
  // Fresh edge coins for every repetition; otherwise one graph serves the whole run.
  bool fresh_coins = true;
  // c' <= 0 derives the rate from the sample: c' = n^3 |Q| / C(n,4).
  ClusterConfig cluster;
};

struct PipelineResult {
  bool accepted = false;
  double threshold = 0.0;
  std::optional<CandidateTree> best;  // best accepted, or best seen on failure
  ClusterOutput clusters;             // the clustering `best` was built from
  int repetitions_run = 0;
  long candidates = 0;
  long qed_calls = 0;
  int qed_failures = 0;  // side loops that stopped early
  double wall_time = 0.0;
  std::string failure;  // empty on success
};

// Repeats clustering over the whole guess grid and every enumerated skeleton, stopping after the
// first repetition that yields an accepted candidate.
PipelineResult run_pipeline(const QuartetSample& sample, const PipelineConfig& cfg);

// Result JSON: accepted, risk, threshold, tree_newick, provenance, optionally wall_time.
std::string result_json(const PipelineResult& result, const LabelTable& labels, bool with_wall_time);

}  // namespace qed
