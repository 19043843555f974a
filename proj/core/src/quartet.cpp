#include "qed/quartet.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "qed/rng.hpp"

namespace qed {

Quartet make_quartet(LeafId p, LeafId q, LeafId r, LeafId s) {
  if (p > q) std::swap(p, q);
  if (r > s) std::swap(r, s);
  if (r < p) {
    std::swap(p, r);
    std::swap(q, s);
  }
  return Quartet{p, q, r, s};
}

Quartet tree_quartet(const PhyloTree& tree, LeafId w, LeafId x, LeafId y, LeafId z) {
  switch (tree.topology(w, x, y, z)) {
    case QuartetTopology::AB_CD: return make_quartet(w, x, y, z);
    case QuartetTopology::AC_BD: return make_quartet(w, y, x, z);
    case QuartetTopology::AD_BC: break;
  }
  return make_quartet(w, z, x, y);
}

bool satisfies(const PhyloTree& tree, const Quartet& q) {
  return tree.topology(q.a, q.b, q.c, q.d) == QuartetTopology::AB_CD;
}

const char* to_string(SampleModel m) { return m == SampleModel::Rcn ? "rcn" : "poisson"; }

std::uint64_t choose4(std::uint64_t n) {
  if (n < 4) return 0;
  return n * (n - 1) / 2 * (n - 2) / 3 * (n - 3) / 4;
}

namespace {

std::uint64_t choose(std::uint64_t n, int k) {
  if (n < static_cast<std::uint64_t>(k)) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(i)) / static_cast<std::uint64_t>(i);
  return r;
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta < 2.0 / 3.0)) throw QuartetError("eta must lie in [0, 2/3)");
}

// One labelled quartet on the given 4-set.
Quartet label_quartet(const PhyloTree& tree, const std::array<LeafId, 4>& s, double eta, Rng& rng,
                      std::uint8_t& random) {
  random = uniform01(rng) < 1.5 * eta ? 1 : 0;
  if (!random) return tree_quartet(tree, s[0], s[1], s[2], s[3]);
  switch (uniform_index(rng, 3)) {
    case 0: return make_quartet(s[0], s[1], s[2], s[3]);
    case 1: return make_quartet(s[0], s[2], s[1], s[3]);
    default: return make_quartet(s[0], s[3], s[1], s[2]);
  }
}

}  // namespace

std::array<LeafId, 4> unrank_4subset(std::uint64_t index, int n) {
  if (index >= choose4(static_cast<std::uint64_t>(n))) throw QuartetError("4-subset index out of range");
  std::array<LeafId, 4> out{};
  std::uint64_t hi = static_cast<std::uint64_t>(n);
  for (int k = 4; k >= 1; --k) {
    // largest v < hi with C(v, k) <= index
    std::uint64_t lo = static_cast<std::uint64_t>(k - 1), top = hi - 1;
    while (lo < top) {
      std::uint64_t mid = (lo + top + 1) / 2;
      if (choose(mid, k) <= index) lo = mid;
      else top = mid - 1;
    }
    out[static_cast<size_t>(k - 1)] = static_cast<LeafId>(lo);
    index -= choose(lo, k);
    hi = lo;
  }
  return out;
}

QuartetSample sample_rcn(const PhyloTree& tree, std::int64_t m, double eta, std::uint64_t seed) {
  check_eta(eta);
  if (m < 0) throw QuartetError("sample size must be nonnegative");
  const int n = tree.leaf_count();
  if (n < 4) throw QuartetError("need at least 4 leaves");
  QuartetSample s;
  s.n = n;
  s.model = SampleModel::Rcn;
  s.eta = eta;
  s.seed = seed;
  s.quartets.reserve(static_cast<size_t>(m));
  s.random_label.reserve(static_cast<size_t>(m));
  Rng rng(seed);
  const std::uint64_t total = choose4(static_cast<std::uint64_t>(n));
  for (std::int64_t i = 0; i < m; ++i) {
    auto set = unrank_4subset(uniform_index(rng, total), n);
    std::uint8_t r = 0;
    s.quartets.push_back(label_quartet(tree, set, eta, rng, r));
    s.random_label.push_back(r);
  }
  return s;
}

QuartetSample sample_poisson(const PhyloTree& tree, double lambda, double eta, std::uint64_t seed) {
  check_eta(eta);
  if (!(lambda > 0.0)) throw QuartetError("Poisson rate must be positive");
  const int n = tree.leaf_count();
  if (n < 4) throw QuartetError("need at least 4 leaves");
  QuartetSample s;
  s.n = n;
  s.model = SampleModel::Poisson;
  s.eta = eta;
  s.lambda = lambda;
  s.seed = seed;
  Rng rng(seed);
  const std::uint64_t total = choose4(static_cast<std::uint64_t>(n));
  std::poisson_distribution<std::int64_t> count(lambda * static_cast<double>(total));
  const std::int64_t x = count(rng);
  s.quartets.reserve(static_cast<size_t>(x));
  for (std::int64_t i = 0; i < x; ++i) {
    auto set = unrank_4subset(uniform_index(rng, total), n);
    std::uint8_t r = 0;
    s.quartets.push_back(label_quartet(tree, set, eta, rng, r));
    s.random_label.push_back(r);
  }
  return s;
}

QuartetSample subsample(const QuartetSample& sample, std::int64_t keep, std::uint64_t seed) {
  if (keep < 0) throw QuartetError("subsample size must be nonnegative");
  QuartetSample out = sample;
  if (static_cast<size_t>(keep) >= sample.size()) return out;
  std::vector<size_t> idx(sample.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  Rng rng(seed);
  // partial Fisher-Yates
  for (size_t i = 0; i < static_cast<size_t>(keep); ++i) {
    size_t j = i + static_cast<size_t>(uniform_index(rng, idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(static_cast<size_t>(keep));
  std::sort(idx.begin(), idx.end());
  out.quartets.clear();
  out.random_label.clear();
  for (size_t i : idx) {
    out.quartets.push_back(sample.quartets[i]);
    if (!sample.random_label.empty()) out.random_label.push_back(sample.random_label[i]);
  }
  return out;
}

QuartetSample rcn_to_poisson(const QuartetSample& sample, double lambda, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw QuartetError("Poisson rate must be positive");
  const double mean = lambda * static_cast<double>(choose4(static_cast<std::uint64_t>(sample.n)));
  const double need = 2.0 * mean;
  if (static_cast<double>(sample.size()) < need) {
    std::ostringstream msg;
    msg << "pool of " << sample.size() << " quartets is too small; need at least " << static_cast<std::int64_t>(std::ceil(need));
    throw QuartetError(msg.str());
  }
  Rng rng(seed);
  std::poisson_distribution<std::int64_t> count(mean);
  const std::int64_t x = count(rng);
  QuartetSample out = subsample(sample, x, derive_seed(seed, "subsample"));
  out.model = SampleModel::Poisson;
  out.lambda = lambda;
  out.seed = seed;
  return out;
}

void write_quartets(std::ostream& out, const QuartetSample& sample, const LabelTable& labels) {
  if (labels.size() != sample.n) throw QuartetError("label table does not match the sample");
  out << "eta=" << std::setprecision(17) << sample.eta << " model=" << to_string(sample.model)
      << " seed=" << sample.seed;
  if (sample.model == SampleModel::Poisson) out << " lambda=" << sample.lambda;
  out << '\n';
  for (int i = 0; i < labels.size(); ++i) out << "# leaf\t" << i << '\t' << labels.label(i) << '\n';
  for (const auto& q : sample.quartets)
    out << labels.label(q.a) << ' ' << labels.label(q.b) << " | " << labels.label(q.c) << ' ' << labels.label(q.d) << '\n';
}

QuartetFile read_quartets(std::istream& in, const LabelTable* labels) {
  QuartetFile f;
  std::string line;
  bool header = false;
  std::map<int, std::string> leaf_lines;
  std::vector<std::array<std::string, 4>> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# leaf\t", 0) == 0) {
        std::istringstream ls(line.substr(7));
        std::string id, label;
        std::getline(ls, id, '\t');
        std::getline(ls, label);
        leaf_lines[std::stoi(id)] = label;
      }
      continue;
    }
    if (!header) {
      std::istringstream hs(line);
      std::string kv;
      bool have_eta = false, have_model = false, have_seed = false;
      while (hs >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw QuartetError("malformed header field '" + kv + "'");
        auto key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "eta") {
          f.sample.eta = std::stod(val);
          have_eta = true;
        } else if (key == "model") {
          if (val == "rcn") f.sample.model = SampleModel::Rcn;
          else if (val == "poisson") f.sample.model = SampleModel::Poisson;
          else throw QuartetError("unknown model '" + val + "'");
          have_model = true;
        } else if (key == "seed") {
          f.sample.seed = std::stoull(val);
          have_seed = true;
        } else if (key == "lambda") {
          f.sample.lambda = std::stod(val);
        }
      }
      if (!have_eta || !have_model || !have_seed) throw QuartetError("header needs eta, model and seed");
      check_eta(f.sample.eta);
      header = true;
      continue;
    }
    std::istringstream qs(line);
    std::array<std::string, 4> r;
    std::string bar, extra;
    if (!(qs >> r[0] >> r[1] >> bar >> r[2] >> r[3]) || bar != "|" || (qs >> extra))
      throw QuartetError("line " + std::to_string(line_no) + ": expected 'a b | c d'");
    rows.push_back(r);
  }
  if (!header) throw QuartetError("missing header line");

  if (!leaf_lines.empty()) {
    std::vector<std::string> names;
    int expect = 0;
    for (auto& [id, label] : leaf_lines) {
      if (id != expect++) throw QuartetError("leaf table ids are not dense");
      names.push_back(label);
    }
    f.labels = LabelTable(std::move(names));
  } else if (labels != nullptr) {
    f.labels = *labels;
  } else {
    throw QuartetError("quartet file has no leaf table and none was supplied");
  }
  f.sample.n = f.labels.size();
  f.sample.quartets.reserve(rows.size());
  for (const auto& r : rows) {
    LeafId v[4];
    for (int i = 0; i < 4; ++i) v[i] = f.labels.id(r[static_cast<size_t>(i)]);
    if (v[0] == v[1] || v[0] == v[2] || v[0] == v[3] || v[1] == v[2] || v[1] == v[3] || v[2] == v[3])
      throw QuartetError("quartet with repeated leaf");
    f.sample.quartets.push_back(make_quartet(v[0], v[1], v[2], v[3]));
  }
  return f;
}

}  // namespace qed
