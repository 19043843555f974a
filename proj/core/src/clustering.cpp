#include "qed/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "qed/rng.hpp"

namespace qed {

const char* to_string(Side s) { return s == Side::Left ? "L" : "R"; }

std::vector<SideGuess> guess_grid(int n, double delta) {
  const double step = delta * n;
  if (!(step >= 1.0)) throw ClusteringError("guess_grid: delta * n must be at least 1");
  std::vector<SideGuess> out;
  const double third = n / 3.0;
  for (int j = 0; third + j * step <= 2.0 * third + 1e-9; ++j) {
    const int left = static_cast<int>(std::floor(third + j * step + 1e-9));
    out.push_back({left, n - left, step});
  }
  return out;
}

double side_budget(int rho, int n, double delta, double margin) { return rho - margin * delta * n; }

namespace {

double draw_delta_hat(Rng& rng, double delta, double max_factor) {
  const double top = std::min(max_factor * delta, 1.0 - 1e-9);
  const double step = delta * delta * delta;
  const auto count = static_cast<std::uint64_t>(std::max(0.0, std::floor((top - delta) / step + 1e-9))) + 1;
  return delta + static_cast<double>(uniform_index(rng, count)) * step;
}

}  // namespace

SideRun run_side(const LeafGraph& graph, Side side, double budget, double delta, const ClusterConfig& cfg,
                 std::uint64_t seed) {
  const int n = graph.leaf_count();
  const int lo = cluster_size_bounds(n, delta).first;
  std::vector<bool> active = graph.active();
  int active_count = graph.active_count();
  int recovered = 0;
  SideRun run;
  if (budget <= 0) return run;
  for (int i = 0; recovered <= budget; ++i) {
    if (active_count < lo) {
      run.stopped_early = true;
      run.error = "active set of " + std::to_string(active_count) + " leaves is below delta*n";
      break;
    }
    const std::uint64_t call_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    Rng rng(derive_seed(call_seed, "delta_hat"));
    QedDiagnostics d;
    d.side = side;
    d.iteration = i;
    d.active = active_count;
    d.recovered = recovered;
    d.delta_hat = draw_delta_hat(rng, delta, cfg.delta_hat_max);
    QedResult res;
    try {
      res = qed(graph, active, delta, d.delta_hat, cfg.model, cfg.sdp, derive_seed(call_seed, "qed"));
    } catch (const QedError& e) {
      run.stopped_early = true;
      run.error = e.what();
      break;
    }
    d.pivot = res.pivot;
    d.ball_size = res.ball_size;
    d.size = static_cast<int>(res.cluster.size());
    d.clamped = res.clamped;
    d.solver_iterations = res.solution.iterations;
    d.converged = res.solution.converged;
    d.warning = res.solution.warning;
    for (LeafId x : res.cluster) active[static_cast<size_t>(x)] = false;
    active_count -= d.size;
    recovered += d.size;
    run.clusters.push_back(std::move(res.cluster));
    run.diagnostics.push_back(std::move(d));
  }
  return run;
}

SideRun truncate_side(const SideRun& run, double budget) {
  SideRun out;
  int recovered = 0;
  if (budget <= 0) return out;
  size_t i = 0;
  for (; i < run.clusters.size() && recovered <= budget; ++i) {
    out.clusters.push_back(run.clusters[i]);
    out.diagnostics.push_back(run.diagnostics[i]);
    recovered += static_cast<int>(run.clusters[i].size());
  }
  if (i == run.clusters.size() && run.stopped_early && recovered <= budget) {
    out.stopped_early = true;
    out.error = run.error;
  }
  return out;
}

ClusterOutput combine_sides(int n, const SideRun& left, const SideRun& right) {
  ClusterOutput out;
  out.left = left.clusters;
  out.right = right.clusters;
  out.diagnostics = left.diagnostics;
  out.diagnostics.insert(out.diagnostics.end(), right.diagnostics.begin(), right.diagnostics.end());
  out.stopped_early = left.stopped_early || right.stopped_early;
  out.error = left.error.empty() ? right.error : left.error;
  std::vector<bool> used(static_cast<size_t>(n), false);
  for (const auto* side : {&out.left, &out.right})
    for (const auto& c : *side)
      for (LeafId x : c) used[static_cast<size_t>(x)] = true;
  for (LeafId x = 0; x < n; ++x)
    if (!used[static_cast<size_t>(x)]) out.leftover.push_back(x);
  return out;
}

ClusterOutput clustering_step(const LeafGraph& graph, const SideGuess& guess, double delta, const ClusterConfig& cfg,
                              std::uint64_t seed) {
  const int n = graph.leaf_count();
  if (guess.rho_left + guess.rho_right != n) throw ClusteringError("clustering_step: guess does not sum to n");
  const SideRun left = run_side(graph, Side::Left, side_budget(guess.rho_left, n, delta, cfg.margin), delta, cfg,
                                derive_seed(seed, "left"));
  const SideRun right = run_side(graph, Side::Right, side_budget(guess.rho_right, n, delta, cfg.margin), delta, cfg,
                                 derive_seed(seed, "right"));
  return combine_sides(n, left, right);
}

void write_diagnostics_jsonl(std::ostream& out, const ClusterOutput& clusters) {
  for (const auto& d : clusters.diagnostics) {
    nlohmann::ordered_json j;
    j["side"] = to_string(d.side);
    j["iteration"] = d.iteration;
    j["active"] = d.active;
    j["recovered"] = d.recovered;
    j["delta_hat"] = d.delta_hat;
    j["pivot"] = d.pivot;
    j["ball"] = d.ball_size;
    j["size"] = d.size;
    j["clamped"] = d.clamped;
    j["solver_iterations"] = d.solver_iterations;
    j["converged"] = d.converged;
    if (!d.warning.empty()) j["warning"] = d.warning;
    out << j.dump() << '\n';
  }
  if (clusters.stopped_early) {
    nlohmann::ordered_json j;
    j["stopped_early"] = true;
    j["error"] = clusters.error;
    out << j.dump() << '\n';
  }
}

}  // namespace qed
