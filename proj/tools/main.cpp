#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "config.hpp"
#include "io.hpp"
#include "qed/newick.hpp"
#include "qed/quartet.hpp"
#include "qed/verification.hpp"

using namespace qedcli;

int main(int argc, char** argv) {
  CLI::App app{"Phylogenetic tree reconstruction from noisy quartets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QED_VERSION);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Write a uniformly random binary tree as Newick");
  g->add_option("-n,--leaves", gen.n, "Leaf count")->required();
  g->add_option("--seed", gen.seed, "Root seed");
  g->add_option("-o,--out", gen.out, "Output Newick file")->required();

  SampleOptions sample;
  auto* s = app.add_subcommand("sample", "Draw labelled quartets from a tree");
  s->add_option("--tree", sample.tree, "Newick file")->required()->check(CLI::ExistingFile);
  s->add_option("--model", sample.model, "rcn | poisson")->check(CLI::IsMember({"rcn", "poisson"}));
  s->add_option("-m", sample.m, "RCN sample size");
  s->add_option("--lambda", sample.lambda, "Poisson rate per 4-set");
  s->add_option("--eta", sample.eta, "Noise rate");
  s->add_option("--seed", sample.seed, "Root seed");
  s->add_option("-o,--out", sample.out, "Output quartet file")->required();

  ReconstructOptions rec;
  auto* r = app.add_subcommand("reconstruct", "Reconstruct a tree from a quartet file");
  r->add_option("--quartets", rec.quartets, "Quartet file")->required()->check(CLI::ExistingFile);
  r->add_option("-c,--config", rec.config, "TOML-style config file")->check(CLI::ExistingFile);
  r->add_option("--set", rec.overrides, "Override a config key (key=value), repeatable");
  r->add_option("-o,--out", rec.out, "Result JSON")->required();
  r->add_option("--newick", rec.newick, "Write the reconstructed tree here");
  r->add_option("--diagnostics", rec.diagnostics, "Write per-QED-call diagnostics (JSON lines)");

  DistOptions dist;
  auto* d = app.add_subcommand("dist", "Quartet distance between two trees on the same leaves");
  d->add_option("first", dist.first, "Newick file")->required()->check(CLI::ExistingFile);
  d->add_option("second", dist.second, "Newick file")->required()->check(CLI::ExistingFile);
  d->add_flag("--sampled", dist.sampled, "Monte Carlo estimate instead of the exact count");
  d->add_option("--samples", dist.samples, "Monte Carlo sample count");
  d->add_option("--seed", dist.seed, "Seed for --sampled");
  d->add_option("-o,--out", dist.out, "Write the TSV line here instead of stdout");

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Run an experiment matrix (bench.* keys) and emit TSV and SVG");
  b->add_option("-c,--config", bench.config, "TOML-style config file")->check(CLI::ExistingFile);
  b->add_option("--set", bench.overrides, "Override a config key (key=value), repeatable");
  b->add_option("-o,--out-dir", bench.out_dir, "Output directory")->required();

  OracleOptions oracle;
  auto* o = app.add_subcommand("oracle-reconstruct", "Adaptive reconstruction against a simulated quartet oracle");
  o->add_option("-n,--leaves", oracle.n, "Leaf count")->required();
  o->add_option("-p", oracle.p, "Probability that a query answers correctly");
  o->add_option("--delta-conf", oracle.delta_conf, "Failure probability for majority voting");
  o->add_option("--budget", oracle.budget, "Query budget (0 = unlimited)");
  o->add_option("--seed", oracle.seed, "Root seed");

  CheckOptions check;
  auto* c = app.add_subcommand("check-invariants", "Validate a Newick tree and optionally score a quartet file");
  c->add_option("tree", check.tree, "Newick file")->required()->check(CLI::ExistingFile);
  c->add_option("--quartets", check.quartets, "Quartet file to score")->check(CLI::ExistingFile);

  app.footer("Config keys:\n" + [] {
    std::string t;
    for (const auto& [k, doc] : config_schema()) t += "  " + k + "  " + doc + "\n";
    return t;
  }() + "\nExit codes: 0 ok, 2 usage, 3 verified failure, 4 internal.\nQED_THREADS sets the bench worker count.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*g) return cmd_gen(gen, std::cerr);
    if (*s) return cmd_sample(sample, std::cerr);
    if (*r) return cmd_reconstruct(rec, std::cerr);
    if (*d) return cmd_dist(dist, std::cout);
    if (*b) return cmd_bench(bench, std::cerr);
    if (*o) return cmd_oracle(oracle, std::cout);
    if (*c) return cmd_check(check, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const qed::NewickError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const qed::QuartetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
