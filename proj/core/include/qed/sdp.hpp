#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qed/graph.hpp"

namespace qed {

inline constexpr double kGrothendieckUpper = 1.783;

enum class EdgeWeighting : std::uint8_t {
  Presence,      // A_uv = 1[(u,v) in E'] - q
  Multiplicity,  // A_uv = #edges(u,v) - q, for dense samples
};

struct SdpModel {
  double c_prime = 0.0;  // quartet rate scale: lambda = c'/n^3
  double eta = 0.0;
  double err = 0.0;
  EdgeWeighting weighting = EdgeWeighting::Presence;
  // Uses C(|L'|-2, 2)/2 quartets per pair instead of |L'|^2/4 for the edge-rate scale, and
  // 1 - exp(-rho) as the presence threshold.
  bool finite_size = false;
};

struct SdpInstance {
  std::vector<LeafId> leaves;  // row i of A is leaves[i]
  std::vector<double> a;       // N x N row-major, symmetric, zero diagonal
  double q = 0.0;
  double delta_hat = 0.0;
  double c_over_n = 0.0;
  int n = 0;  // leaf count of the full instance

  int size() const { return static_cast<int>(leaves.size()); }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * leaves.size() + static_cast<size_t>(j)]; }
  double spread_bound() const { return delta_hat * static_cast<double>(leaves.size()); }
  double abs_sum() const;  // entrywise l1 norm
};

// Edge-rate scale c/n for the active set of `graph`.
double edge_rate_scale(const LeafGraph& graph, const SdpModel& model);

// Matrix and threshold over graph.active_leaves(); q = rho-(delta_hat + 4 delta_hat^2).
SdpInstance build_sdp(const LeafGraph& graph, double delta_hat, const SdpModel& model);

struct SdpOptions {
  int rank = 0;            // cap on the returned factor rank; 0 keeps every positive eigenvalue
  double tol_feas = 1e-6;  // ADMM primal and dual residuals (max entry)
  double tol_obj = 1e-4;   // tolerated objective loss of the final feasibility polish, times |A|_1
  int max_iters = 10000;
  double penalty_init = 50.0;   // ADMM penalty, in units of the mean |A_uv|
  double penalty_growth = 1.0;  // residual-balancing factor; 1 keeps the penalty fixed
};

// Parses "geometric:<init>:<growth>".
void parse_penalty_schedule(const std::string& text, SdpOptions& opts);

struct GramSolution {
  std::vector<LeafId> leaves;
  int rank = 0;
  std::vector<double> vectors;  // N x rank row-major, unit rows
  double objective = 0.0;       // sum over u != v of A_uv <u,v>
  int iterations = 0;
  double nonneg_violation = 0.0;  // max(0, -min <u,v>)
  double norm_violation = 0.0;    // max |<u,u> - 1|
  double spread_violation = 0.0;  // max(0, max_u sum_v <u,v> - bound) / N
  bool converged = false;
  std::string warning;

  int size() const { return static_cast<int>(leaves.size()); }
  double inner(int i, int j) const;
};

// Solves the relaxation to the global optimum of the convex program, then polishes the factor
// so that every constraint holds exactly (unit rows, nonnegative inner products, spread bound).
GramSolution solve_sdp(const SdpInstance& inst, const SdpOptions& opts);

// Recomputes the feasibility residuals of `sol` for `inst` and stores them in `sol`.
void audit_solution(const SdpInstance& inst, GramSolution& sol);

struct Rounding {
  LeafId pivot = -1;
  std::vector<LeafId> ball;  // {v : |u - v|^2 <= 1}, sorted
};

// Uniform pivot u; the ball {v : |u - v|^2 <= 1} (equivalently <u,v> >= 1/2).
Rounding round_solution(const GramSolution& sol, std::uint64_t seed);

struct QedResult {
  std::vector<LeafId> cluster;  // sorted
  LeafId pivot = -1;
  int ball_size = 0;
  bool clamped = false;
  double q = 0.0;
  double objective = 0.0;
  GramSolution solution;
};

class QedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One QED call on the leaves active in both `graph` and `active`. The ball is trimmed to the
// 2*delta*n vectors nearest the pivot, or padded to delta*n with the nearest remaining ones.
QedResult qed(const LeafGraph& graph, const std::vector<bool>& active, double delta, double delta_hat,
              const SdpModel& model, const SdpOptions& opts, std::uint64_t seed);

// Inclusive bounds on cluster sizes: [ceil(delta n), floor(2 delta n)].
std::pair<int, int> cluster_size_bounds(int n, double delta);

}  // namespace qed
