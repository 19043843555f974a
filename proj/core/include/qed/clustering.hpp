#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "qed/graph.hpp"
#include "qed/sdp.hpp"

namespace qed {

class ClusteringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Side : std::uint8_t { Left, Right };

const char* to_string(Side s);

// Guessed leaf counts of the two subtrees below the root.
struct SideGuess {
  int rho_left = 0;
  int rho_right = 0;
  double step = 0.0;  // delta * n
};

// rho_left = floor(n/3 + j delta n) for j = 0, 1, ... while n/3 + j delta n <= 2n/3.
std::vector<SideGuess> guess_grid(int n, double delta);

struct ClusterConfig {
  SdpModel model;
  SdpOptions sdp;
  // A side keeps calling QED while its clusters hold at most rho - margin * delta * n leaves; a
  // non-positive budget makes no calls.
  double margin = 49.0;
  // delta_hat is drawn from {delta (1 + j delta^2)} up to delta_hat_max * delta (and below 1).
  double delta_hat_max = 8.0;
};

struct QedDiagnostics {
  Side side = Side::Left;
  int iteration = 0;
  int active = 0;      // active leaves before the call
  int recovered = 0;   // clustered leaves on this side before the call
  double delta_hat = 0.0;
  LeafId pivot = -1;
  int ball_size = 0;
  int size = 0;
  bool clamped = false;
  int solver_iterations = 0;
  bool converged = false;
  std::string warning;
};

// One side's run of the loop. Calls depend only on their index, so the run for a smaller budget is
// a prefix of the run for a larger one.
struct SideRun {
  std::vector<std::vector<LeafId>> clusters;
  std::vector<QedDiagnostics> diagnostics;
  bool stopped_early = false;
  std::string error;
};

SideRun run_side(const LeafGraph& graph, Side side, double budget, double delta, const ClusterConfig& cfg,
                 std::uint64_t seed);

// The clusters `run` would have produced under a smaller budget.
SideRun truncate_side(const SideRun& run, double budget);

struct ClusterOutput {
  std::vector<std::vector<LeafId>> left, right;  // each sorted
  std::vector<LeafId> leftover;                   // sorted
  std::vector<QedDiagnostics> diagnostics;
  bool stopped_early = false;
  std::string error;

  int k_left() const { return static_cast<int>(left.size()); }
  int k_right() const { return static_cast<int>(right.size()); }
};

// Leftover = leaves in no cluster of either side.
ClusterOutput combine_sides(int n, const SideRun& left, const SideRun& right);

// Loop budget rho - margin * delta * n.
double side_budget(int rho, int n, double delta, double margin);

// Both side loops start from every leaf of `graph`.
ClusterOutput clustering_step(const LeafGraph& graph, const SideGuess& guess, double delta, const ClusterConfig& cfg,
                              std::uint64_t seed);

// One JSON object per QED call.
void write_diagnostics_jsonl(std::ostream& out, const ClusterOutput& clusters);

}  // namespace qed
