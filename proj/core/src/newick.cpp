#include "qed/newick.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace qed {

LabelTable::LabelTable(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw NewickError("empty leaf label");
    if (!ids_.emplace(labels_[i], static_cast<LeafId>(i)).second)
      throw NewickError("duplicate leaf label '" + labels_[i] + "'");
  }
}

LabelTable LabelTable::numbered(int n, std::string_view prefix) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) labels.push_back(std::string(prefix) + std::to_string(i));
  return LabelTable(std::move(labels));
}

std::optional<LeafId> LabelTable::find(std::string_view label) const {
  auto it = ids_.find(std::string(label));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

LeafId LabelTable::id(std::string_view label) const {
  auto found = find(label);
  if (!found) throw NewickError("unknown leaf label '" + std::string(label) + "'");
  return *found;
}

void LabelTable::write_tsv(std::ostream& out) const {
  for (size_t i = 0; i < labels_.size(); ++i) out << labels_[i] << '\t' << i << '\n';
}

LabelTable LabelTable::read_tsv(std::istream& in) {
  std::vector<std::pair<LeafId, std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw NewickError("label table row without a tab: '" + line + "'");
    rows.emplace_back(std::stoi(line.substr(tab + 1)), line.substr(0, tab));
  }
  std::sort(rows.begin(), rows.end());
  std::vector<std::string> labels;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != static_cast<LeafId>(i)) throw NewickError("label table ids are not dense 0..n-1");
    labels.push_back(rows[i].second);
  }
  return LabelTable(std::move(labels));
}

bool natural_less(std::string_view a, std::string_view b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      // Compare numerically by stripped length, then lexically.
      auto sa = a.substr(i, ie - i), sb = b.substr(j, je - j);
      while (sa.size() > 1 && sa[0] == '0') sa.remove_prefix(1);
      while (sb.size() > 1 && sb[0] == '0') sb.remove_prefix(1);
      if (sa.size() != sb.size()) return sa.size() < sb.size();
      if (sa != sb) return sa < sb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
  return a < b;
}

namespace {

struct Node {
  std::string label;
  std::vector<int> children;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  std::vector<Node> run() {
    skip_ws();
    int root = parse_subtree();
    skip_ws();
    if (!consume(';')) fail("expected ';' at end of tree");
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters after ';'");
    root_ = root;
    return std::move(nodes_);
  }
  int root() const { return root_; }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw NewickError("newick: " + msg + " at offset " + std::to_string(pos_));
  }
  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '[') {  // comment
        auto end = s_.find(']', pos_);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 1;
      } else {
        break;
      }
    }
  }
  bool consume(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string parse_label() {
    skip_ws();
    std::string out;
    if (consume('\'')) {
      while (true) {
        if (pos_ >= s_.size()) fail("unterminated quoted label");
        char c = s_[pos_++];
        if (c == '\'') {
          if (consume('\'')) out.push_back('\'');
          else break;
        } else {
          out.push_back(c);
        }
      }
      return out;
    }
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == '[' ||
          std::isspace(static_cast<unsigned char>(c)))
        break;
      out.push_back(c);
      ++pos_;
    }
    return out;
  }
  void skip_branch_length() {
    skip_ws();
    if (!consume(':')) return;
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == 'e' || s_[pos_] == 'E' || s_[pos_] == '-' || s_[pos_] == '+'))
      ++pos_;
    if (pos_ == start) fail("empty branch length");
  }
  int parse_subtree() {
    skip_ws();
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (consume('(')) {
      do {
        int child = parse_subtree();
        nodes_[static_cast<size_t>(id)].children.push_back(child);
        skip_ws();
      } while (consume(','));
      if (!consume(')')) fail("expected ')' or ','");
      nodes_[static_cast<size_t>(id)].label = parse_label();  // internal label, ignored
      nodes_[static_cast<size_t>(id)].label.clear();
    } else {
      std::string label = parse_label();
      if (label.empty()) fail("empty leaf label");
      nodes_[static_cast<size_t>(id)].label = std::move(label);
    }
    skip_branch_length();
    return id;
  }

  std::string_view s_;
  size_t pos_ = 0;
  std::vector<Node> nodes_;
  int root_ = 0;
};

}  // namespace

LabeledTree parse_newick(std::string_view text, const LabelTable* table) {
  Parser parser(text);
  std::vector<Node> nodes = parser.run();
  const int root = parser.root();

  std::vector<std::string> leaf_labels;
  for (const auto& nd : nodes)
    if (nd.children.empty()) leaf_labels.push_back(nd.label);
  {
    std::set<std::string> uniq(leaf_labels.begin(), leaf_labels.end());
    if (uniq.size() != leaf_labels.size()) {
      std::vector<std::string> sorted = leaf_labels;
      std::sort(sorted.begin(), sorted.end());
      auto dup = std::adjacent_find(sorted.begin(), sorted.end());
      throw NewickError("newick: duplicate leaf label '" + *dup + "'");
    }
  }
  const int n = static_cast<int>(leaf_labels.size());
  if (n < 3) throw NewickError("newick: need at least 3 leaves");

  LabelTable labels;
  if (table != nullptr) {
    if (table->size() != n) throw NewickError("newick: leaf count differs from the label table");
    labels = *table;
  } else {
    std::vector<std::string> sorted = leaf_labels;
    std::sort(sorted.begin(), sorted.end(), [](const std::string& a, const std::string& b) { return natural_less(a, b); });
    labels = LabelTable(std::move(sorted));
  }

  for (size_t i = 0; i < nodes.size(); ++i) {
    const size_t k = nodes[i].children.size();
    const bool is_root = static_cast<int>(i) == root;
    if (k == 1) throw NewickError("newick: unary vertex is not allowed");
    if (k > 3 || (k == 3 && !is_root))
      throw NewickError("newick: multifurcating vertex with " + std::to_string(k) + " children");
  }

  // Map parse nodes to tree vertices.
  std::vector<VertexId> vid(nodes.size(), kNoVertex);
  VertexId next_internal = n;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].children.empty()) vid[i] = labels.id(nodes[i].label);
    else if (!(static_cast<int>(i) == root && nodes[i].children.size() == 2)) vid[i] = next_internal++;
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const auto& ch = nodes[i].children;
    if (vid[i] == kNoVertex) {
      edges.emplace_back(vid[static_cast<size_t>(ch[0])], vid[static_cast<size_t>(ch[1])]);
      continue;
    }
    for (int c : ch) edges.emplace_back(vid[i], vid[static_cast<size_t>(c)]);
  }
  return LabeledTree{PhyloTree(n, edges), std::move(labels)};
}

namespace {

std::string quote_if_needed(const std::string& label) {
  bool plain = std::none_of(label.begin(), label.end(), [](char c) {
    return c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == '[' || c == ']' || c == '\'' ||
           std::isspace(static_cast<unsigned char>(c));
  });
  if (plain) return label;
  std::string out = "'";
  for (char c : label) {
    if (c == '\'') out += "''";
    else out.push_back(c);
  }
  return out + "'";
}

}  // namespace

std::string serialize_newick(const PhyloTree& tree, const LabelTable& labels) {
  if (labels.size() != tree.leaf_count()) throw NewickError("label table does not match the tree");
  const VertexId root = tree.neighbors(0)[0];
  const auto nv = static_cast<size_t>(tree.vertex_count());

  // Smallest leaf below each vertex when hanging from `root`.
  std::vector<VertexId> parent(nv, kNoVertex);
  std::vector<VertexId> order{root};
  std::vector<bool> seen(nv, false);
  seen[static_cast<size_t>(root)] = true;
  for (size_t i = 0; i < order.size(); ++i) {
    for (VertexId w : tree.neighbors(order[i])) {
      if (seen[static_cast<size_t>(w)]) continue;
      seen[static_cast<size_t>(w)] = true;
      parent[static_cast<size_t>(w)] = order[i];
      order.push_back(w);
    }
  }
  std::vector<LeafId> min_leaf(nv, tree.leaf_count());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = static_cast<size_t>(*it);
    if (tree.is_leaf(*it)) min_leaf[v] = *it;
    if (parent[v] != kNoVertex) {
      auto& pm = min_leaf[static_cast<size_t>(parent[v])];
      pm = std::min(pm, min_leaf[v]);
    }
  }

  std::ostringstream out;
  std::function<void(VertexId)> emit = [&](VertexId v) {
    if (tree.is_leaf(v)) {
      out << quote_if_needed(labels.label(v));
      return;
    }
    std::vector<VertexId> kids;
    for (VertexId w : tree.neighbors(v))
      if (w != parent[static_cast<size_t>(v)]) kids.push_back(w);
    std::sort(kids.begin(), kids.end(),
              [&](VertexId a, VertexId b) { return min_leaf[static_cast<size_t>(a)] < min_leaf[static_cast<size_t>(b)]; });
    out << '(';
    for (size_t i = 0; i < kids.size(); ++i) {
      if (i) out << ',';
      emit(kids[i]);
    }
    out << ')';
  };
  emit(root);
  out << ';';
  return out.str();
}

}  // namespace qed
