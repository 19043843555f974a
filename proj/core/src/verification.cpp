#include "qed/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <set>

#include "qed/rng.hpp"

namespace qed {

double empirical_risk(const PhyloTree& tree, const QuartetSample& sample) {
  if (sample.quartets.empty()) throw PipelineError("empirical_risk: empty sample");
  if (sample.n != tree.leaf_count()) throw PipelineError("empirical_risk: sample and tree have different leaf counts");
  return static_cast<double>(count_violations(tree, sample, sample.size())) / static_cast<double>(sample.size());
}

std::size_t count_violations(const PhyloTree& tree, const QuartetSample& sample, std::size_t stop_after) {
  std::size_t wrong = 0;
  for (const auto& q : sample.quartets)
    if (!satisfies(tree, q) && ++wrong > stop_after) break;
  return wrong;
}

double acceptance_threshold(double eta, double eps) { return eta + 0.75 * eps * (1.0 - 1.5 * eta); }

bool accept(double risk, double eta, double eps) { return risk <= acceptance_threshold(eta, eps); }

namespace {

void validate(const QuartetSample& sample, const PipelineConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw PipelineError("pipeline: eps must be positive");
  if (!(cfg.eta >= 0.0 && cfg.eta < 2.0 / 3.0)) throw PipelineError("pipeline: eta must lie in [0, 2/3)");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw PipelineError("pipeline: delta must lie in (0, 1)");
  if (cfg.repetitions < 0) throw PipelineError("pipeline: repetitions must be non-negative");
  if (cfg.skeleton_budget <= 0) throw PipelineError("pipeline: skeleton budget must be positive");
  if (sample.n < 4) throw PipelineError("pipeline: need at least 4 leaves");
  if (cfg.delta * sample.n < 1.0) throw PipelineError("pipeline: delta * n must be at least 1");
  if (sample.quartets.empty()) throw PipelineError("pipeline: the sample is empty, so no QED call can run");
}

// Lower risk first, then lower provenance hash.
bool better(const CandidateTree& a, const CandidateTree& b) {
  if (a.risk != b.risk) return a.risk < b.risk;
  return a.provenance.hash() < b.provenance.hash();
}

}  // namespace

PipelineResult run_pipeline(const QuartetSample& sample, const PipelineConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  validate(sample, cfg);
  const int n = sample.n;
  PipelineResult res;
  res.threshold = acceptance_threshold(cfg.eta, cfg.eps);

  ClusterConfig cc = cfg.cluster;
  cc.model.eta = cfg.eta;
  if (cc.model.c_prime <= 0.0)
    cc.model.c_prime = std::pow(static_cast<double>(n), 3) * static_cast<double>(sample.size()) /
                       static_cast<double>(choose4(static_cast<std::uint64_t>(n)));
  const auto guesses = guess_grid(n, cfg.delta);
  double max_left = -1e300, max_right = -1e300;
  for (const auto& g : guesses) {
    max_left = std::max(max_left, side_budget(g.rho_left, n, cfg.delta, cc.margin));
    max_right = std::max(max_right, side_budget(g.rho_right, n, cfg.delta, cc.margin));
  }
  const LeafGraph shared = cfg.fresh_coins ? LeafGraph() : build_graph(sample, derive_seed(cfg.seed, "coins"));

  std::optional<CandidateTree> best_any;
  ClusterOutput best_any_clusters;
  const double total = static_cast<double>(sample.size());
  const auto accept_count = static_cast<std::size_t>(std::floor(res.threshold * total)) + 1;
  std::size_t best_wrong = 0;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    const std::uint64_t rs = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
    const LeafGraph fresh = cfg.fresh_coins ? build_graph(sample, derive_seed(rs, "coins")) : LeafGraph();
    const LeafGraph& graph = cfg.fresh_coins ? fresh : shared;
    const SideRun left = run_side(graph, Side::Left, max_left, cfg.delta, cc, derive_seed(rs, "left"));
    const SideRun right = run_side(graph, Side::Right, max_right, cfg.delta, cc, derive_seed(rs, "right"));
    res.qed_calls += static_cast<long>(left.diagnostics.size() + right.diagnostics.size());
    res.qed_failures += left.stopped_early + right.stopped_early;
    ++res.repetitions_run;

    std::set<std::pair<size_t, size_t>> seen;
    for (size_t gi = 0; gi < guesses.size(); ++gi) {
      const auto& g = guesses[gi];
      const SideRun l = truncate_side(left, side_budget(g.rho_left, n, cfg.delta, cc.margin));
      const SideRun r = truncate_side(right, side_budget(g.rho_right, n, cfg.delta, cc.margin));
      if (!seen.insert({l.clusters.size(), r.clusters.size()}).second) continue;
      const ClusterOutput out = combine_sides(n, l, r);
      const auto shapes = enumerate_skeletons(out.k_left(), out.k_right(), cfg.skeleton_budget, derive_seed(rs, "skeleton"));
      for (size_t si = 0; si < shapes.size(); ++si) {
        CandidateTree cand = attach_clusters(shapes[si], out, n);
        cand.provenance.repetition = rep;
        cand.provenance.guess = static_cast<int>(gi);
        cand.provenance.rho_left = g.rho_left;
        cand.provenance.skeleton = static_cast<int>(si);
        cand.provenance.seed = rs;
        ++res.candidates;
        // A candidate worse than both the threshold and the best so far cannot matter.
        const std::size_t limit = best_any ? std::max(accept_count, best_wrong) : sample.size();
        const std::size_t wrong = count_violations(cand.tree, sample, limit);
        if (wrong > limit) continue;
        cand.risk = static_cast<double>(wrong) / total;
        const bool ok = cand.risk <= res.threshold;
        if (ok && (!res.accepted || better(cand, *res.best))) {
          res.accepted = true;
          res.best = cand;
          res.clusters = out;
        }
        if (!best_any || better(cand, *best_any)) {
          best_wrong = wrong;
          best_any = std::move(cand);
          best_any_clusters = out;
        }
      }
    }
    if (res.accepted) break;
  }
  if (!res.accepted) {
    res.best = best_any;
    res.clusters = best_any_clusters;
    res.failure = cfg.repetitions == 0 ? "no repetitions requested"
                                       : "no candidate reached the acceptance threshold in " +
                                             std::to_string(res.repetitions_run) + " repetitions";
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::string result_json(const PipelineResult& result, const LabelTable& labels, bool with_wall_time) {
  nlohmann::ordered_json j;
  j["accepted"] = result.accepted;
  if (result.best) j["risk"] = result.best->risk;
  else j["risk"] = nullptr;
  j["threshold"] = result.threshold;
  if (result.best) j["tree_newick"] = serialize_newick(result.best->tree, labels);
  else j["tree_newick"] = nullptr;
  nlohmann::ordered_json p;
  if (result.best) {
    const auto& pr = result.best->provenance;
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(pr.skeleton_hash));
    p["repetition"] = pr.repetition;
    p["guess"] = pr.guess;
    p["rho_left"] = pr.rho_left;
    p["skeleton"] = pr.skeleton;
    p["skeleton_shape"] = pr.skeleton_shape;
    p["skeleton_hash"] = hash;
    p["duplicates"] = pr.duplicates;
    p["seed"] = pr.seed;
  }
  p["repetitions_run"] = result.repetitions_run;
  p["candidates"] = result.candidates;
  p["qed_calls"] = result.qed_calls;
  p["qed_failures"] = result.qed_failures;
  j["provenance"] = p;
  if (!result.accepted) j["failure"] = result.failure;
  if (with_wall_time) j["wall_time"] = result.wall_time;
  return j.dump(2) + "\n";
}

}  // namespace qed
