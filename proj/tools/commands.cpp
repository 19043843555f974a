#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "config.hpp"
#include "io.hpp"
#include "qed/metrics.hpp"
#include "qed/oracle.hpp"
#include "qed/rng.hpp"
#include "qed/verification.hpp"

namespace qedcli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

qed::LabeledTree load_tree(const fs::path& path, const qed::LabelTable* table = nullptr) {
  return qed::parse_newick(read_file(path), table);
}

std::string fmt(double x) {
  std::ostringstream o;
  o << std::setprecision(10) << x;
  return o.str();
}

}  // namespace

int cmd_gen(const GenOptions& o, std::ostream& log) {
  if (o.n < 4) throw ConfigError("gen: n must be at least 4");
  const auto t0 = Clock::now();
  const qed::PhyloTree tree = qed::random_tree(o.n, o.seed);
  write_atomic(o.out, qed::serialize_newick(tree, qed::LabelTable::numbered(o.n)) + "\n");
  write_manifest(o.out, {"gen", {{"n", std::to_string(o.n)}}, {{"tree", o.seed}}, {o.out.string()}, seconds_since(t0)});
  log << "wrote " << o.out.string() << " (" << o.n << " leaves)\n";
  return kOk;
}

int cmd_sample(const SampleOptions& o, std::ostream& log) {
  const auto t0 = Clock::now();
  const qed::LabeledTree lt = load_tree(o.tree);
  qed::QuartetSample sample;
  if (o.model == "rcn") {
    if (o.m < 0) throw ConfigError("sample: m must be non-negative");
    sample = qed::sample_rcn(lt.tree, o.m, o.eta, o.seed);
  } else if (o.model == "poisson") {
    sample = qed::sample_poisson(lt.tree, o.lambda, o.eta, o.seed);
  } else {
    throw ConfigError("sample: model must be rcn or poisson");
  }
  std::ostringstream text;
  qed::write_quartets(text, sample, lt.labels);
  write_atomic(o.out, text.str());
  write_manifest(o.out,
                 {"sample",
                  {{"model", o.model}, {"m", std::to_string(o.m)}, {"lambda", fmt(o.lambda)}, {"eta", fmt(o.eta)}},
                  {{"sample", o.seed}},
                  {o.out.string()},
                  seconds_since(t0)});
  log << "wrote " << sample.size() << " quartets to " << o.out.string() << "\n";
  return kOk;
}

int cmd_reconstruct(const ReconstructOptions& o, std::ostream& log) {
  const auto t0 = Clock::now();
  KeyValues kv;
  if (!o.config.empty()) kv = read_config_file(o.config);
  for (const auto& a : o.overrides) apply_override(kv, a);
  std::istringstream qin(read_file(o.quartets));
  const qed::QuartetFile qf = qed::read_quartets(qin);
  if (!kv.count("eta")) kv["eta"] = fmt(qf.sample.eta);
  const ExperimentConfig cfg = to_experiment(kv);

  const qed::PipelineResult res = qed::run_pipeline(qf.sample, cfg.pipeline);
  std::vector<std::string> outputs{o.out.string()};
  write_atomic(o.out, qed::result_json(res, qf.labels, cfg.wall_time));
  if (!o.newick.empty() && res.best) {
    write_atomic(o.newick, qed::serialize_newick(res.best->tree, qf.labels) + "\n");
    outputs.push_back(o.newick.string());
  }
  if (!o.diagnostics.empty()) {
    std::ostringstream d;
    qed::write_diagnostics_jsonl(d, res.clusters);
    write_atomic(o.diagnostics, d.str());
    outputs.push_back(o.diagnostics.string());
  }
  write_manifest(o.out, {"reconstruct", kv, {{"root", cfg.pipeline.seed}}, outputs, seconds_since(t0)});
  log << (res.accepted ? "accepted" : "failed") << " risk=" << (res.best ? fmt(res.best->risk) : "n/a")
      << " threshold=" << fmt(res.threshold) << " repetitions=" << res.repetitions_run << "\n";
  return res.accepted ? kOk : kFailure;
}

int cmd_dist(const DistOptions& o, std::ostream& out) {
  const qed::LabeledTree a = load_tree(o.first);
  const qed::LabeledTree b = load_tree(o.second, &a.labels);
  std::ostringstream line;
  if (o.sampled) {
    const auto est = qed::quartet_distance_sampled(a.tree, b.tree, o.samples, o.seed);
    line << "sampled\t" << a.tree.leaf_count() << '\t' << fmt(est.estimate) << '\t' << fmt(est.stderr_) << '\t'
         << o.samples << '\n';
  } else {
    line << "exact\t" << a.tree.leaf_count() << '\t' << fmt(qed::quartet_distance_exact(a.tree, b.tree)) << '\n';
  }
  if (o.out.empty()) out << line.str();
  else write_atomic(o.out, line.str());
  return kOk;
}

namespace {

struct Cell {
  int n;
  std::int64_t m;
  double eta;
  int seed;
  double dist = 0, risk = 0, wall = 0;
  bool accepted = false;
  std::string name;
};

}  // namespace

int cmd_bench(const BenchOptions& o, std::ostream& log) {
  const auto t0 = Clock::now();
  KeyValues kv;
  if (!o.config.empty()) kv = read_config_file(o.config);
  for (const auto& a : o.overrides) apply_override(kv, a);
  const ExperimentConfig base = to_experiment(kv);
  if (!kv.count("bench.n") || !kv.count("bench.m_per_n")) throw ConfigError("bench: bench.n and bench.m_per_n are required");
  const auto ns = parse_list(kv.at("bench.n"));
  const auto ms = parse_list(kv.at("bench.m_per_n"));
  const auto etas = kv.count("bench.eta") ? parse_list(kv.at("bench.eta")) : std::vector<double>{base.pipeline.eta};
  const int seeds = kv.count("bench.seeds") ? std::stoi(kv.at("bench.seeds")) : 1;
  if (seeds < 1) throw ConfigError("bench: bench.seeds must be positive");

  std::vector<Cell> cells;
  for (double n : ns)
    for (double mn : ms)
      for (double eta : etas)
        for (int s = 0; s < seeds; ++s) {
          if (n < 4 || n != std::floor(n)) throw ConfigError("bench: every n must be an integer >= 4");
          if (!(eta >= 0 && eta < 2.0 / 3.0)) throw ConfigError("bench: eta must lie in [0, 2/3)");
          Cell c{static_cast<int>(n), static_cast<std::int64_t>(std::llround(mn * n)), eta, s};
          std::ostringstream name;
          name << "n" << c.n << "_m" << c.m << "_eta" << eta << "_s" << s;
          c.name = name.str();
          cells.push_back(c);
        }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::tie(a.n, a.m, a.eta, a.seed) < std::tie(b.n, b.m, b.eta, b.seed);
  });

  const fs::path trees = o.out_dir / "trees";
  std::atomic<size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (size_t i; (i = next++) < cells.size();) {
      try {
        Cell& c = cells[i];
        const std::uint64_t cs = qed::derive_seed(qed::derive_seed(base.pipeline.seed, "bench"), c.name);
        const qed::PhyloTree truth = qed::random_tree(c.n, qed::derive_seed(cs, "tree"));
        const qed::QuartetSample sample = qed::sample_rcn(truth, c.m, c.eta, qed::derive_seed(cs, "sample"));
        qed::PipelineConfig pc = base.pipeline;
        pc.eta = c.eta;
        pc.seed = qed::derive_seed(cs, "pipeline");
        const qed::PipelineResult r = qed::run_pipeline(sample, pc);
        const auto labels = qed::LabelTable::numbered(c.n);
        write_atomic(trees / (c.name + ".true.nwk"), qed::serialize_newick(truth, labels) + "\n");
        c.accepted = r.accepted;
        c.risk = r.best ? r.best->risk : std::nan("");
        c.dist = r.best ? qed::quartet_distance_exact(truth, r.best->tree) : std::nan("");
        if (r.best) write_atomic(trees / (c.name + ".est.nwk"), qed::serialize_newick(r.best->tree, labels) + "\n");
        c.wall = r.wall_time;
        std::lock_guard lock(log_mutex);
        log << c.name << " dist=" << fmt(c.dist) << " accepted=" << c.accepted << "\n";
      } catch (...) {
        std::lock_guard lock(log_mutex);
        if (!error) error = std::current_exception();
        next = cells.size();
      }
    }
  };
  const int width = std::min<int>(thread_count(), static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < width; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::ostringstream tsv;
  tsv << "n\tm\teta\tseed\tdist_exact\trisk\taccepted\twall_time\n";
  std::map<double, Series> by_eta;
  for (const auto& c : cells) {
    tsv << c.n << '\t' << c.m << '\t' << fmt(c.eta) << '\t' << c.seed << '\t' << fmt(c.dist) << '\t' << fmt(c.risk)
        << '\t' << (c.accepted ? 1 : 0) << '\t' << fmt(c.wall) << '\n';
    auto& s = by_eta[c.eta];
    s.name = "eta=" + fmt(c.eta);
    if (!std::isnan(c.dist)) s.points.emplace_back(static_cast<double>(c.m) / c.n, c.dist);
  }
  std::vector<Series> series;
  for (auto& [eta, s] : by_eta) series.push_back(s);
  const fs::path tsv_path = o.out_dir / "bench.tsv";
  write_atomic(tsv_path, tsv.str());
  write_atomic(o.out_dir / "dist_vs_m.svg", svg_plot(series, "quartet distance vs samples per leaf", "m / n", "dist_exact"));
  write_manifest(tsv_path, {"bench", kv, {{"root", base.pipeline.seed}},
                            {tsv_path.string(), (o.out_dir / "dist_vs_m.svg").string(), trees.string()},
                            seconds_since(t0)});
  log << "wrote " << cells.size() << " rows to " << tsv_path.string() << "\n";
  return kOk;
}

int cmd_oracle(const OracleOptions& o, std::ostream& out) {
  if (o.n < 4) throw ConfigError("oracle-reconstruct: n must be at least 4");
  if (!(o.p > 0.5 && o.p <= 1.0)) throw ConfigError("oracle-reconstruct: p must lie in (1/2, 1]");
  const qed::PhyloTree hidden = qed::random_tree(o.n, qed::derive_seed(o.seed, "hidden"));
  qed::QuartetOracle oracle(hidden, o.p, qed::derive_seed(o.seed, "oracle"),
                            o.budget > 0 ? o.budget : std::numeric_limits<std::int64_t>::max());
  oracle.set_logging(false);
  const auto res = qed::adaptive_reconstruct(oracle, o.delta_conf, qed::derive_seed(o.seed, "order"));
  const double d = qed::quartet_distance_exact(hidden, res.tree);
  out << "n\tp\tqueries\tdistance\n" << o.n << '\t' << fmt(o.p) << '\t' << res.queries << '\t' << fmt(d) << '\n';
  return d == 0.0 ? kOk : kFailure;
}

int cmd_check(const CheckOptions& o, std::ostream& out) {
  qed::LabeledTree lt;
  try {
    lt = load_tree(o.tree);
  } catch (const qed::NewickError& e) {
    out << "invalid\t" << e.what() << '\n';
    return kFailure;
  } catch (const qed::TreeError& e) {
    out << "invalid\t" << e.what() << '\n';
    return kFailure;
  }
  const std::string problem = qed::check_invariants(lt.tree);
  if (!problem.empty()) {
    out << "invalid\t" << problem << '\n';
    return kFailure;
  }
  const qed::RootedTree rooted = qed::balanced_root(lt.tree);
  const auto kids = rooted.children(rooted.root());
  out << "ok\tleaves=" << lt.tree.leaf_count() << "\troot_split=" << rooted.subtree_leaf_count(kids[0]) << "/"
      << rooted.subtree_leaf_count(kids[1]) << '\n';
  if (!o.quartets.empty()) {
    std::istringstream qin(read_file(o.quartets));
    const qed::QuartetFile qf = qed::read_quartets(qin, &lt.labels);
    out << "risk\t" << fmt(qed::empirical_risk(lt.tree, qf.sample)) << "\tquartets=" << qf.sample.size() << '\n';
  }
  return kOk;
}

}  // namespace qedcli
