#include <benchmark/benchmark.h>

#include "qed/graph.hpp"
#include "qed/metrics.hpp"
#include "qed/oracle.hpp"
#include "qed/quartet.hpp"
#include "qed/sdp.hpp"
#include "qed/tree.hpp"
#include "qed/verification.hpp"

namespace {

void BM_QuartetDistanceExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const qed::PhyloTree a = qed::random_tree(n, 1), b = qed::random_tree(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(qed::quartet_distance_exact(a, b));
}
BENCHMARK(BM_QuartetDistanceExact)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_QuartetDistanceSampled(benchmark::State& state) {
  const qed::PhyloTree a = qed::random_tree(256, 1), b = qed::random_tree(256, 2);
  for (auto _ : state) benchmark::DoNotOptimize(qed::quartet_distance_sampled(a, b, state.range(0), 3));
}
BENCHMARK(BM_QuartetDistanceSampled)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SampleRcn(benchmark::State& state) {
  const qed::PhyloTree t = qed::random_tree(64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(qed::sample_rcn(t, state.range(0), 0.1, 5));
}
BENCHMARK(BM_SampleRcn)->Arg(12800)->Arg(64000)->Unit(benchmark::kMillisecond);

void BM_EmpiricalRisk(benchmark::State& state) {
  const qed::PhyloTree t = qed::random_tree(64, 1), other = qed::random_tree(64, 2);
  const qed::QuartetSample s = qed::sample_rcn(t, state.range(0), 0.2, 5);
  for (auto _ : state) benchmark::DoNotOptimize(qed::empirical_risk(other, s));
}
BENCHMARK(BM_EmpiricalRisk)->Arg(12800)->Arg(32000)->Unit(benchmark::kMillisecond);

void BM_SolveSdp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const qed::PhyloTree t = qed::random_tree(n, 1);
  const qed::QuartetSample s = qed::sample_rcn(t, 200LL * n, 0.0, 5);
  const qed::LeafGraph g = qed::build_graph(s, 9);
  qed::SdpModel model;
  model.weighting = qed::EdgeWeighting::Multiplicity;
  model.finite_size = true;
  model.c_prime = static_cast<double>(n) * n * n * static_cast<double>(s.size()) / static_cast<double>(qed::choose4(n));
  const qed::SdpInstance inst = qed::build_sdp(g, 0.2, model);
  qed::SdpOptions opts;
  opts.tol_feas = 1e-3;
  opts.penalty_init = 10;
  for (auto _ : state) benchmark::DoNotOptimize(qed::solve_sdp(inst, opts));
}
BENCHMARK(BM_SolveSdp)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AdaptiveOracle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const qed::PhyloTree t = qed::random_tree(n, 1);
  for (auto _ : state) {
    qed::QuartetOracle oracle(t, 1.0, 2);
    oracle.set_logging(false);
    benchmark::DoNotOptimize(qed::adaptive_reconstruct(oracle, 0.05, 3));
  }
}
BENCHMARK(BM_AdaptiveOracle)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
