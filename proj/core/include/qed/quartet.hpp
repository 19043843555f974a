#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "qed/newick.hpp"
#include "qed/tree.hpp"

namespace qed {

// Canonical quartet ab|cd with a < b, c < d and a < c.
struct Quartet {
  LeafId a, b, c, d;

  bool operator==(const Quartet&) const = default;
  auto operator<=>(const Quartet&) const = default;

  bool contains(LeafId x) const { return x == a || x == b || x == c || x == d; }
};

// Builds the canonical form of the split {p,q}|{r,s}.
Quartet make_quartet(LeafId p, LeafId q, LeafId r, LeafId s);

// The split a tree induces on four leaves, canonicalized.
Quartet tree_quartet(const PhyloTree& tree, LeafId w, LeafId x, LeafId y, LeafId z);

// True when `tree` induces the split claimed by `q`.
bool satisfies(const PhyloTree& tree, const Quartet& q);

enum class SampleModel : std::uint8_t { Rcn, Poisson };

const char* to_string(SampleModel m);

class QuartetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuartetSample {
  int n = 0;
  SampleModel model = SampleModel::Rcn;
  double eta = 0.0;
  double lambda = 0.0;  // Poisson rate per 4-set; 0 under RCN
  std::uint64_t seed = 0;
  std::vector<Quartet> quartets;
  // 1 when the label was drawn uniformly over the 3 splits, 0 when copied from the tree.
  // Only known for generated samples; empty after reading a file.
  std::vector<std::uint8_t> random_label;

  size_t size() const { return quartets.size(); }
};

std::uint64_t choose4(std::uint64_t n);

// Unranks index in [0, C(n,4)) to the 4-subset w<x<y<z (colex order).
std::array<LeafId, 4> unrank_4subset(std::uint64_t index, int n);

// m i.i.d. quartets over uniform 4-subsets. A label is correct w.p. 1 - eta and each wrong split
// has probability eta/2. Realized as: w.p. 3*eta/2 a uniformly random split, else the true split.
QuartetSample sample_rcn(const PhyloTree& tree, std::int64_t m, double eta, std::uint64_t seed);

// Every 4-set receives Poisson(lambda) quartets.
QuartetSample sample_poisson(const PhyloTree& tree, double lambda, double eta, std::uint64_t seed);

// Poisson(lambda*C(n,4)) quartets drawn without replacement from an RCN pool, or the whole pool
// when the draw exceeds it. The pool must hold at least 2*lambda*C(n,4) quartets.
QuartetSample rcn_to_poisson(const QuartetSample& sample, double lambda, std::uint64_t seed);

// Uniform subsample without replacement, keeping at most `keep` quartets.
QuartetSample subsample(const QuartetSample& sample, std::int64_t keep, std::uint64_t seed);

// Text format: header "eta=<v> model=<rcn|poisson> seed=<s>", then "# leaf\t<id>\t<label>"
// lines carrying the label table, then one "a b | c d" line per quartet.
void write_quartets(std::ostream& out, const QuartetSample& sample, const LabelTable& labels);

struct QuartetFile {
  QuartetSample sample;
  LabelTable labels;
};

// Labels come from the embedded leaf lines, or from `labels` when the file has none.
QuartetFile read_quartets(std::istream& in, const LabelTable* labels = nullptr);

}  // namespace qed
