// Acceptance gate: one PASS/FAIL line per criterion. `--only 3,5` runs a subset.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "dense_sdp.hpp"
#include "io.hpp"
#include "planted.hpp"
#include "qed/graph.hpp"
#include "qed/metrics.hpp"
#include "qed/oracle.hpp"
#include "qed/quartet.hpp"
#include "qed/rng.hpp"
#include "qed/sdp.hpp"
#include "qed/verification.hpp"
#include "test_trees.hpp"

using namespace qed;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Tolerances and sizes, pinned.
constexpr double kSigmas = 3.0;
constexpr double kGammaEmbed = 1.0 / 16.0;

// Tuned pipeline settings shared by criteria 10, 11 and 14.
PipelineConfig tuned_pipeline(double eps, double eta, std::uint64_t seed) {
  PipelineConfig cfg;
  cfg.eps = eps;
  cfg.eta = eta;
  cfg.delta = 0.15;
  cfg.repetitions = 500;
  cfg.skeleton_budget = 2000;
  cfg.seed = seed;
  cfg.cluster.margin = 1;
  cfg.cluster.delta_hat_max = 2;
  cfg.cluster.model.weighting = EdgeWeighting::Multiplicity;
  cfg.cluster.model.finite_size = true;
  cfg.cluster.sdp.tol_feas = 1e-3;
  cfg.cluster.sdp.penalty_init = 10;
  return cfg;
}

// 1. Exact quartet distance against a path-based enumeration.
Outcome c1() {
  const auto t0 = Clock::now();
  int mismatches = 0, pairs = 0;
  for (int n : {8, 10, 12})
    for (std::uint64_t s = 0; s < 100; ++s) {
      const PhyloTree a = random_tree(n, derive_seed(1, s)), b = random_tree(n, derive_seed(2, s + 1000 * n));
      long differ = 0, total = 0;
      for (int w = 0; w < n; ++w)
        for (int x = w + 1; x < n; ++x)
          for (int y = x + 1; y < n; ++y)
            for (int z = y + 1; z < n; ++z) {
              ++total;
              differ += qedtest::naive_topology(a, w, x, y, z) != qedtest::naive_topology(b, w, x, y, z);
            }
      const double naive = static_cast<double>(differ) / static_cast<double>(total);
      mismatches += quartet_distance_exact(a, b) != naive;
      ++pairs;
    }
  const double secs = since(t0);
  return {mismatches == 0 && secs < 10.0, fmt("%d/%d pairs bit-identical, %.2fs (limit 10s)", pairs - mismatches, pairs, secs)};
}

std::vector<PhyloTree> sign_trees() {
  std::vector<PhyloTree> trees;
  for (std::uint64_t s = 0; s < 200; ++s) trees.push_back(random_tree(4 + static_cast<int>(s % 9), derive_seed(3, s)));
  return trees;
}

// 2. Sign of the embedding polynomial decides every quartet.
Outcome c2() {
  long checked = 0, wrong = 0;
  for (const auto& t : sign_trees()) {
    const RootedTree r = balanced_root(t);
    const auto x = embed_tree(r, EmbeddingParams(kGammaEmbed));
    auto at = [&](int i) { return x[static_cast<size_t>(i)]; };
    const int n = t.leaf_count();
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = b + 1; c < n; ++c)
          for (int d = c + 1; d < n; ++d) {
            const auto top = quartet_topology(t, a, b, c, d);
            wrong += (quartet_sign(at(a), at(b), at(c), at(d)) > 0) != (top == QuartetTopology::AB_CD);
            wrong += (quartet_sign(at(a), at(c), at(b), at(d)) > 0) != (top == QuartetTopology::AC_BD);
            wrong += (quartet_sign(at(a), at(d), at(b), at(c)) > 0) != (top == QuartetTopology::AD_BC);
            checked += 3;
          }
  }
  return {wrong == 0, fmt("%ld sign evaluations, %ld disagreements", checked, wrong)};
}

// 3. Embedding distance bounds, exactly in binary64.
Outcome c3() {
  long checked = 0, wrong = 0;
  int deepest = 0;
  for (const auto& t : sign_trees()) {
    const RootedTree r = balanced_root(t);
    const auto x = embed_tree(r, EmbeddingParams(kGammaEmbed));
    const int n = t.leaf_count();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const int lam = r.depth(r.lca(i, j));
        deepest = std::max(deepest, lam);
        const double g = std::pow(kGammaEmbed, lam);
        const double dist = std::abs(x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)]);
        wrong += !(dist <= g && dist >= (1 - 2 * kGammaEmbed) * g);
        ++checked;
      }
  }
  return {wrong == 0 && deepest <= 50, fmt("%ld leaf pairs, %ld outside bounds, max lca depth %d", checked, wrong, deepest)};
}

// 4. Every labelling of the shattered family is realised.
Outcome c4() {
  bool ok = true;
  std::string detail;
  for (int n = 5; n <= 10; ++n) {
    const auto family = shatter_family(n);
    const int k = n - 3;
    std::set<std::vector<bool>> realised;
    for (int mask = 0; mask < (1 << k); ++mask) {
      std::vector<bool> g;
      for (int i = 0; i < k; ++i) g.push_back((mask >> i) & 1);
      const PhyloTree w = witness_tree(n, g);
      std::vector<bool> seen;
      for (const auto& s : family) {
        const bool l0 = satisfies(w, s.label0), l1 = satisfies(w, s.label1);
        ok = ok && l0 != l1;
        seen.push_back(l1);
      }
      ok = ok && seen == g && check_invariants(w).empty();
      realised.insert(seen);
    }
    ok = ok && family.size() == static_cast<size_t>(k) && realised.size() == (1u << k);
    detail += fmt("n=%d:%zu/%d ", n, realised.size(), 1 << k);
  }
  return {ok, detail};
}

// 5. Anchor mapping keeps disjoint paths disjoint, exhaustive over anchor sets containing the root.
Outcome c5() {
  long tuples = 0, premises = 0, violations = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const int n = 4 + static_cast<int>(s % 6);
    const RootedTree t = balanced_root(random_tree(n, derive_seed(5, s)));
    const int nv = t.vertex_count();
    // path masks and lca table
    std::vector<std::uint32_t> path(static_cast<size_t>(nv * nv));
    std::vector<VertexId> lca_of(static_cast<size_t>(nv * nv));
    for (VertexId u = 0; u < nv; ++u)
      for (VertexId v = 0; v < nv; ++v) {
        const VertexId w = t.lca(u, v);
        std::uint32_t m = 1u << w;
        for (VertexId x = u; x != w; x = t.parent(x)) m |= 1u << x;
        for (VertexId x = v; x != w; x = t.parent(x)) m |= 1u << x;
        path[static_cast<size_t>(u * nv + v)] = m;
        lca_of[static_cast<size_t>(u * nv + v)] = w;
      }
    auto P = [&](VertexId u, VertexId v) { return path[static_cast<size_t>(u * nv + v)]; };
    auto L = [&](VertexId u, VertexId v) { return lca_of[static_cast<size_t>(u * nv + v)]; };
    std::vector<std::array<VertexId, 4>> quads;
    for (VertexId a = 0; a < nv; ++a)
      for (VertexId b = a + 1; b < nv; ++b)
        for (VertexId c = 0; c < nv; ++c)
          for (VertexId d = c + 1; d < nv; ++d) {
            if (c == a || c == b || d == a || d == b) continue;
            if (std::pair(a, b) > std::pair(c, d)) continue;
            if ((P(a, b) & P(c, d)) == 0) quads.push_back({a, b, c, d});
          }
    std::vector<VertexId> others;
    for (VertexId v = 0; v < nv; ++v)
      if (v != t.root()) others.push_back(v);
    for (std::uint32_t mask = 0; mask < (1u << others.size()); ++mask) {
      std::vector<VertexId> anchors{t.root()};
      for (size_t i = 0; i < others.size(); ++i)
        if (mask >> i & 1) anchors.push_back(others[i]);
      const auto phi = phi_vertices(t, anchors);
      auto f = [&](VertexId v) { return phi[static_cast<size_t>(v)]; };
      for (const auto& q : quads) {
        ++tuples;
        bool premise = true;
        for (int x = 0; x < 4 && premise; ++x)
          for (int y = 0; y < 4 && premise; ++y)
            for (int z = y + 1; z < 4 && premise; ++z)
              if (x != y && x != z) premise = f(q[static_cast<size_t>(x)]) != f(L(q[static_cast<size_t>(y)], q[static_cast<size_t>(z)]));
        if (!premise) continue;
        ++premises;
        violations += (P(f(q[0]), f(q[1])) & P(f(q[2]), f(q[3]))) != 0;
      }
    }
  }
  return {violations == 0, fmt("%ld (U, tuple) cases, %ld meet both conditions, %ld violations", tuples, premises, violations)};
}

// 6. Edge frequencies against the edge-probability bounds at n=60.
Outcome c6() {
  const int n = 60, draws = 10000;
  const double c_prime = 40.0, eta = 0.2;
  const double lambda = c_prime / (static_cast<double>(n) * n * n);
  const PhyloTree t = random_tree(n, derive_seed(6, "tree"));
  const RootedTree r = balanced_root(t);
  std::vector<int> hits(static_cast<size_t>(n * n), 0);
  for (int k = 0; k < draws; ++k) {
    const auto s = sample_poisson(t, lambda, eta, derive_seed(derive_seed(6, "sample"), k));
    const auto g = build_graph(s, derive_seed(derive_seed(6, "coins"), k));
    std::vector<char> seen(static_cast<size_t>(n * n), 0);
    for (const auto& e : g.edges()) seen[static_cast<size_t>(std::min(e.u, e.v) * n + std::max(e.u, e.v))] = 1;
    for (size_t i = 0; i < seen.size(); ++i) hits[i] += seen[i];
  }
  // Finite-n rate: each pair meets C(n-2,2) other pairs, each 4-set carries lambda quartets and
  // half of them offer the edge. x = (k-2)/(n-3), k the leaves under lca(a,b), makes the bounds
  // hold for the exact pair counts: C(n-k,2)/C(n-2,2) >= ((n-k-1)/(n-3))^2.
  const double scale = lambda * (n - 2.0) * (n - 3.0) / 4.0;
  auto prob = [](double rate) { return -std::expm1(-rate); };
  const auto kids = r.children(r.root());
  const double alpha = static_cast<double>(r.subtree_leaf_count(kids[0])) / n, beta = 1.0 - alpha;
  int pairs = 0, bad = 0, cross = 0, cross_bad = 0;
  double worst = 0;
  int worst_k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double f = static_cast<double>(hits[static_cast<size_t>(a * n + b)]) / draws;
      const double x = (r.subtree_leaf_count(r.lca(a, b)) - 2.0) / (n - 3.0);
      const auto rb = rho_bounds(x, scale, eta, 0.0);
      const double lo = prob(rb.lower), hi = prob(rb.upper);
      const double sig_lo = std::sqrt(lo * (1 - lo) / draws), sig_hi = std::sqrt(hi * (1 - hi) / draws);
      const double z = std::max((lo - f) / sig_lo, (f - hi) / sig_hi);
      if (z > worst) {
        worst = z;
        worst_k = r.subtree_leaf_count(r.lca(a, b));
      }
      bad += z > kSigmas;
      ++pairs;
      if (r.lca(a, b) == r.root()) {
        const double up = prob(cross_root_upper(alpha, beta, scale, eta));
        cross_bad += (f - up) / std::sqrt(up * (1 - up) / draws) > kSigmas;
        ++cross;
      }
    }
  return {bad == 0 && cross_bad == 0,
          fmt("%d pairs, %d outside [rho-, rho+] +- 3 sigma (worst %.2f sigma, clade of %d); %d cross-root pairs, %d above bound",
              pairs, bad, worst, worst_k, cross, cross_bad)};
}

// 7. Clean and random counts per 4-set are independent Poisson variables.
Outcome c7() {
  const int n = 8, draws = 10000;
  const double lambda = 1.5, eta = 0.3, q = 1.5 * eta;
  const PhyloTree t = random_tree(n, derive_seed(7, "tree"));
  const double sets = static_cast<double>(choose4(n));
  std::vector<double> c1v, r1v, ctv, rtv;
  for (int k = 0; k < draws; ++k) {
    const auto s = sample_poisson(t, lambda, eta, derive_seed(7, k));
    double c1 = 0, r1 = 0, ct = 0, rt = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      const auto& qq = s.quartets[i];
      const bool random = s.random_label[i] != 0;
      (random ? rt : ct) += 1;
      std::array<LeafId, 4> ids{qq.a, qq.b, qq.c, qq.d};
      std::sort(ids.begin(), ids.end());
      if (ids == std::array<LeafId, 4>{0, 1, 2, 3}) (random ? r1 : c1) += 1;
    }
    c1v.push_back(c1);
    r1v.push_back(r1);
    ctv.push_back(ct);
    rtv.push_back(rt);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto cov = [&](const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a), mb = mean(b);
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size() - 1);
  };
  const double N = draws;
  int failed = 0;
  std::string detail;
  auto check = [&](const char* name, double got, double want, double sd) {
    const double z = std::abs(got - want) / sd;
    failed += z > kSigmas;
    detail += fmt("%s %.2fs ", name, z);
  };
  for (auto [tag, c, r, m] : {std::tuple{"set", &c1v, &r1v, lambda}, std::tuple{"all", &ctv, &rtv, lambda * sets}}) {
    const double mc = m * (1 - q), mr = m * q;
    check(fmt("%s.mean_clean", tag).c_str(), mean(*c), mc, std::sqrt(mc / N));
    check(fmt("%s.mean_random", tag).c_str(), mean(*r), mr, std::sqrt(mr / N));
    check(fmt("%s.var_clean", tag).c_str(), cov(*c, *c), mc, std::sqrt((mc + 2 * mc * mc) / N));
    check(fmt("%s.var_random", tag).c_str(), cov(*r, *r), mr, std::sqrt((mr + 2 * mr * mr) / N));
    check(fmt("%s.cov", tag).c_str(), cov(*c, *r), 0.0, std::sqrt(mc * mr / N));
  }
  return {failed == 0, fmt("%d of 10 statistics beyond 3 sigma; ", failed) + detail};
}

// 8. First-order solver against the dense reference on small planted instances.
Outcome c8() {
  int instances = 0, bad_obj = 0, bad_feas = 0;
  double worst_rel = 0, worst_res = 0;
  for (int n = 3; n <= 8; ++n)
    for (int k : {1, (n + 1) / 2})
      for (std::uint64_t s = 0; s < 5; ++s) {
        const auto inst = qedtest::planted_instance(n, k, 0.9, 0.2, 0.5, static_cast<double>(k) / n + 0.05,
                                                    derive_seed(8, s * 100 + static_cast<std::uint64_t>(n * 10 + k)));
        const auto ref = qedtest::dense_reference(inst);
        const auto sol = solve_sdp(inst, SdpOptions{});
        const double rel = std::abs(sol.objective - ref.objective) / std::max(1.0, std::abs(ref.objective));
        const double res = std::max({sol.nonneg_violation, sol.norm_violation, sol.spread_violation});
        worst_rel = std::max(worst_rel, rel);
        worst_res = std::max(worst_res, res);
        bad_obj += rel > 0.01;
        bad_feas += res > 1e-6;
        ++instances;
      }
  return {bad_obj == 0 && bad_feas == 0,
          fmt("%d instances, worst objective gap %.2e (limit 1%%), worst residual %.1e (limit 1e-6)", instances, worst_rel,
              worst_res)};
}

// 9. One QED call recovers a planted delta*n subtree at average degree ~30.
Outcome c9() {
  const int n = 300, blocks = 10, runs = 50;
  const double delta = 0.1, degree = 30.0;
  const double lambda = degree * n / 2.0 / static_cast<double>(choose4(n));
  int ok = 0;
  double slowest = 0;
  std::vector<int> errors;
  for (int k = 0; k < runs; ++k) {
    const auto t0 = Clock::now();
    const std::uint64_t seed = derive_seed(9, k);
    const auto pt = qedtest::planted_blocks(n, blocks, derive_seed(seed, "tree"));
    const auto s = sample_poisson(pt.tree, lambda, 0.0, derive_seed(seed, "sample"));
    const auto g = build_graph(s, derive_seed(seed, "coins"));
    SdpModel model;
    model.c_prime = lambda * n * n * n;
    model.weighting = EdgeWeighting::Multiplicity;
    model.finite_size = true;
    SdpOptions opts;
    opts.tol_feas = 1e-3;
    opts.penalty_init = 10;
    const auto res = qed::qed(g, std::vector<bool>(n, true), delta, delta * (1 + delta * delta), model, opts, derive_seed(seed, "qed"));
    const std::set<LeafId> got(res.cluster.begin(), res.cluster.end());
    int best = n;
    for (const auto& b : pt.blocks) {
      int sym = static_cast<int>(got.size());
      for (LeafId x : b) sym += got.count(x) ? -1 : 1;
      best = std::min(best, sym);
    }
    errors.push_back(best);
    ok += best <= 0.25 * delta * n;
    slowest = std::max(slowest, since(t0));
  }
  std::sort(errors.begin(), errors.end());
  return {ok >= 0.3 * runs && slowest <= 120.0,
          fmt("%d/%d runs with |S xor S^| <= %.1f (need %d); median error %d; slowest run %.1fs (limit 120s)", ok, runs,
              0.25 * delta * n, static_cast<int>(std::ceil(0.3 * runs)), errors[errors.size() / 2], slowest)};
}

// Shared body of criteria 10 and 11.
Outcome end_to_end(int tag, int m_per_n, double eta, double eps, double need) {
  const int n = 64, seeds = 20;
  int good = 0, accepted = 0, unsound = 0;
  double total = 0;
  for (int k = 0; k < seeds; ++k) {
    const std::uint64_t root = derive_seed(static_cast<std::uint64_t>(tag), k);
    const PhyloTree truth = random_tree(n, derive_seed(root, "tree"));
    const auto s = sample_rcn(truth, static_cast<std::int64_t>(m_per_n) * n, eta, derive_seed(root, "sample"));
    const auto res = run_pipeline(s, tuned_pipeline(eps, eta, root));
    total += res.wall_time;
    if (!res.accepted) continue;
    ++accepted;
    const double d = quartet_distance_exact(truth, res.best->tree);
    if (d <= eps) {
      ++good;
      continue;
    }
    // Accepting a tree beyond eps is only excused when the sample's risk estimate missed by more
    // than the convergence margin.
    const double clean = 1 - 1.5 * eta;
    if (std::abs(res.best->risk - (clean * d + eta)) <= eps * clean / 4) ++unsound;
  }
  const int needed = static_cast<int>(std::ceil(need * seeds));
  return {good >= needed && unsound == 0,
          fmt("%d/%d seeds accepted with dist <= %.2f (need %d); %d accepted in total; %d unsound; %.0fs", good, seeds, eps,
              needed, accepted, unsound, total)};
}

Outcome c10() { return end_to_end(10, 200, 0.0, 0.3, 0.5); }
Outcome c11() { return end_to_end(11, 500, 0.2, 0.4, 0.3); }

// 12. Empirical risk tracks (1 - 3 eta/2) dist + eta uniformly over a fixed candidate family.
Outcome c12() {
  const int n = 64, family = 100, trials = 40;
  const double eps = 0.3, eta = 0.2, clean = 1 - 1.5 * eta;
  const auto m = static_cast<std::int64_t>(std::ceil(50.0 * n / ((eps * clean) * (eps * clean))));
  const PhyloTree truth = random_tree(n, derive_seed(12, "tree"));
  // Candidates: the truth with k random leaf transpositions, k = 0..99, so distances span [0, ~0.7].
  std::vector<PhyloTree> cands;
  std::vector<double> dist;
  Rng rng(derive_seed(12, "family"));
  for (int k = 0; k < family; ++k) {
    std::vector<LeafId> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    for (int j = 0; j < k; ++j) std::swap(perm[uniform_index(rng, n)], perm[uniform_index(rng, n)]);
    auto edges = truth.edges();
    for (auto& [u, v] : edges) {
      if (u < n) u = perm[static_cast<size_t>(u)];
      if (v < n) v = perm[static_cast<size_t>(v)];
    }
    cands.emplace_back(n, edges);
    dist.push_back(quartet_distance_exact(truth, cands.back()));
  }
  const double margin = eps * clean / 4;
  int ok = 0;
  double worst = 0;
  for (int k = 0; k < trials; ++k) {
    const auto s = sample_rcn(truth, m, eta, derive_seed(derive_seed(12, "sample"), k));
    double dev = 0;
    for (int i = 0; i < family; ++i)
      dev = std::max(dev, std::abs(empirical_risk(cands[static_cast<size_t>(i)], s) - (clean * dist[static_cast<size_t>(i)] + eta)));
    worst = std::max(worst, dev);
    ok += dev <= margin;
  }
  const double span = *std::max_element(dist.begin(), dist.end());
  return {ok >= 0.95 * trials, fmt("m=%lld; %d/%d trials with max deviation <= %.4f (need 38); worst %.4f; dist up to %.3f",
                                   static_cast<long long>(m), ok, trials, margin, worst, span)};
}

// 13. Adaptive oracle reconstruction.
Outcome c13() {
  bool exact = true;
  std::string detail;
  for (int n : {16, 64, 256}) {
    const PhyloTree t = random_tree(n, derive_seed(13, n));
    QuartetOracle o(t, 1.0, derive_seed(13, "oracle"));
    o.set_logging(false);
    const auto res = adaptive_reconstruct(o, 0.05, derive_seed(13, "order"));
    const double d = quartet_distance_exact(t, res.tree);
    const double cap = 12.0 * n * std::log2(n);
    exact = exact && d == 0.0 && static_cast<double>(res.queries) <= cap;
    detail += fmt("n=%d dist=%g queries=%lld/%.0f; ", n, d, static_cast<long long>(res.queries), cap);
  }
  int ok = 0;
  for (int k = 0; k < 100; ++k) {
    const PhyloTree t = random_tree(32, derive_seed(derive_seed(13, "noisy-tree"), k));
    QuartetOracle o(t, 0.9, derive_seed(derive_seed(13, "noisy-oracle"), k));
    o.set_logging(false);
    ok += quartet_distance_exact(t, adaptive_reconstruct(o, 0.05, derive_seed(derive_seed(13, "noisy-order"), k)).tree) == 0.0;
  }
  detail += fmt("p=0.9: %d/100 exact (need 95)", ok);
  return {exact && ok >= 95, detail};
}

// 14. Byte-identical result JSON from repeated reconstruct runs.
Outcome c14() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qed_acceptance_c14";
  fs::remove_all(dir);
  std::ostringstream log;
  qedcli::cmd_gen({48, 14, dir / "t.nwk"}, log);
  qedcli::SampleOptions so;
  so.tree = dir / "t.nwk";
  so.m = 200 * 48;
  so.eta = 0.1;
  so.seed = 15;
  so.out = dir / "q.txt";
  qedcli::cmd_sample(so, log);
  qedcli::write_atomic(dir / "c.toml",
                       "eps = 0.3\ndelta = 0.15\nrepetitions = 50\nseed = 16\nmargin = 1\ndelta_hat_max = 2\n"
                       "weighting = multiplicity\nfinite_size = true\nsdp.tol_feas = 1e-3\n"
                       "sdp.penalty_schedule = geometric:10:1\n");
  std::vector<std::string> outputs;
  for (int k = 0; k < 3; ++k) {
    qedcli::ReconstructOptions ro;
    ro.quartets = so.out;
    ro.config = dir / "c.toml";
    ro.out = dir / ("r" + std::to_string(k) + ".json");
    qedcli::cmd_reconstruct(ro, log);
    outputs.push_back(qedcli::read_file(ro.out));
  }
  fs::remove_all(dir);
  const bool same = outputs[0] == outputs[1] && outputs[1] == outputs[2] && !outputs[0].empty();
  return {same, fmt("3 runs, %zu bytes each, %s", outputs[0].size(), same ? "identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 14));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14};
  int failed = 0;
  for (int i = 1; i <= 14; ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), i) == only.end()) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[static_cast<size_t>(i - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << (i < 10 ? " " : "") << i << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
              << fmt("  [%.1fs]", since(t0)) << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
