#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qed/tree.hpp"

namespace qed {

class NewickError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bidirectional label <-> LeafId map. Persisted as TSV "label<TAB>id".
class LabelTable {
 public:
  LabelTable() = default;
  explicit LabelTable(std::vector<std::string> labels);

  // t0, t1, ..., t{n-1}
  static LabelTable numbered(int n, std::string_view prefix = "t");

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(LeafId id) const { return labels_.at(static_cast<size_t>(id)); }
  std::optional<LeafId> find(std::string_view label) const;
  LeafId id(std::string_view label) const;  // throws NewickError when absent
  const std::vector<std::string>& labels() const { return labels_; }

  void write_tsv(std::ostream& out) const;
  static LabelTable read_tsv(std::istream& in);

  bool operator==(const LabelTable& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, LeafId> ids_;
};

// Orders labels with embedded numbers numerically ("t2" < "t10").
bool natural_less(std::string_view a, std::string_view b);

struct LabeledTree {
  PhyloTree tree;
  LabelTable labels;
};

// Parses a binary Newick tree. Leaf ids come from `table` when given, otherwise from the
// natural order of the labels. Branch lengths and internal labels are skipped. A root of
// degree 2 is suppressed; multifurcations, unary vertices and duplicate labels are errors.
LabeledTree parse_newick(std::string_view text, const LabelTable* table = nullptr);

// Canonical form: rooted at the neighbour of leaf 0, children ordered by smallest leaf id.
std::string serialize_newick(const PhyloTree& tree, const LabelTable& labels);

}  // namespace qed
