#include "qed/reconstruction.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <set>

#include "qed/rng.hpp"

namespace qed {

namespace {

using Shapes = std::vector<std::string>;

std::string join2(const std::string& head, std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return head + "(" + a + "," + b + ")";
}

// Shapes over the anchors in `mask` (bit i = label base + i).
class SideEnumerator {
 public:
  SideEnumerator(int k, int base) : base_(base), memo_(static_cast<size_t>(1) << k) {}

  const Shapes& get(unsigned mask) {
    auto& slot = memo_[mask];
    if (!slot.empty() || mask == 0) return slot;
    Shapes out;
    for (unsigned bit = 1; bit <= mask; bit <<= 1) {
      if (!(mask & bit)) continue;
      const std::string label = std::to_string(base_ + std::countr_zero(bit));
      const unsigned rest = mask & ~bit;
      if (rest == 0) {
        out.push_back(label);
        continue;
      }
      for (const auto& t : get(rest)) out.push_back(label + "(" + t + ")");
      for_pairs(rest, [&](const std::string& a, const std::string& b) { out.push_back(join2(label, a, b)); });
    }
    for_pairs(mask, [&](const std::string& a, const std::string& b) { out.push_back(join2("*", a, b)); });
    slot = std::move(out);
    return slot;
  }

 private:
  // Unordered splits of mask into two nonempty parts; the part holding the lowest bit comes first.
  void for_pairs(unsigned mask, const std::function<void(const std::string&, const std::string&)>& f) {
    const unsigned low = mask & (~mask + 1);
    const unsigned others = mask & ~low;
    for (unsigned sub = others;; sub = (sub - 1) & others) {
      const unsigned first = sub | low, second = mask & ~first;
      if (second != 0) {
        const Shapes& a = get(first);
        const Shapes& b = get(second);
        for (const auto& x : a)
          for (const auto& y : b) f(x, y);
      }
      if (sub == 0) break;
    }
  }

  int base_;
  std::vector<Shapes> memo_;
};

std::string random_side(Rng& rng, std::vector<int> labels) {
  if (labels.size() == 1) return std::to_string(labels[0]);
  auto split = [&](std::vector<int> set) {
    std::vector<int> a, b;
    while (a.empty() || b.empty()) {
      a.clear();
      b.clear();
      for (int x : set) (uniform_index(rng, 2) ? a : b).push_back(x);
    }
    return std::pair{a, b};
  };
  if (uniform_index(rng, 2)) {
    auto [a, b] = split(labels);
    return join2("*", random_side(rng, a), random_side(rng, b));
  }
  const size_t pick = uniform_index(rng, labels.size());
  const std::string head = std::to_string(labels[pick]);
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(pick));
  if (labels.size() == 1 || uniform_index(rng, 2)) return head + "(" + random_side(rng, labels) + ")";
  auto [a, b] = split(labels);
  return join2(head, random_side(rng, a), random_side(rng, b));
}

std::uint64_t fnv(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h);
}

SkeletonShape parse_shape(const std::string& text, int k_left, int k_right) {
  SkeletonShape s;
  s.k_left = k_left;
  s.k_right = k_right;
  s.canonical = text;
  s.hash = fnv(text);
  auto& t = s.tree;
  int steiner = 1 + k_left + k_right;
  size_t pos = 0;
  std::function<int(int)> node = [&](int parent) {
    int label;
    if (text[pos] == '*') {
      label = steiner++;
      ++pos;
    } else {
      size_t end = pos;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      label = std::stoi(text.substr(pos, end - pos));
      pos = end;
    }
    const int idx = static_cast<int>(t.vertex.size());
    t.vertex.push_back(label);
    t.parent.push_back(parent);
    t.children.emplace_back();
    t.anchor.push_back(label <= k_left + k_right);
    if (parent >= 0) t.children[static_cast<size_t>(parent)].push_back(idx);
    if (pos < text.size() && text[pos] == '(') {
      do {
        ++pos;
        node(idx);
      } while (text[pos] == ',');
      ++pos;  // ')'
    }
    return idx;
  };
  node(-1);
  return s;
}

std::string assemble(const std::string& left, const std::string& right) {
  if (left.empty() && right.empty()) return "0";
  if (left.empty()) return "0(" + right + ")";
  if (right.empty()) return "0(" + left + ")";
  return "0(" + left + "," + right + ")";
}

}  // namespace

std::uint64_t side_shape_count(int k) {
  constexpr std::uint64_t kCap = std::numeric_limits<std::uint64_t>::max() / 4;
  auto sat = [&](long double x) { return x >= static_cast<long double>(kCap) ? kCap : static_cast<std::uint64_t>(x); };
  std::vector<long double> f(static_cast<size_t>(std::max(k, 1)) + 1, 0), pairs(f.size(), 0);
  f[0] = 1;
  for (int m = 1; m <= k; ++m) {
    long double p = 0, binom = 1;
    for (int j = 1; j < m; ++j) {
      binom = binom * (m - j + 1) / j;
      p += binom * f[static_cast<size_t>(j)] * f[static_cast<size_t>(m - j)];
    }
    pairs[static_cast<size_t>(m)] = p / 2;
    f[static_cast<size_t>(m)] = m * (f[static_cast<size_t>(m - 1)] + pairs[static_cast<size_t>(m - 1)]) + pairs[static_cast<size_t>(m)];
  }
  return k == 0 ? 1 : sat(f[static_cast<size_t>(k)]);
}

std::vector<SkeletonShape> enumerate_skeletons(int k_left, int k_right, int budget, std::uint64_t seed) {
  if (budget <= 0) throw ReconstructionError("enumerate_skeletons: budget must be positive");
  if (k_left < 0 || k_right < 0) throw ReconstructionError("enumerate_skeletons: negative anchor count");
  std::vector<std::string> texts;
  if (1 + k_left + k_right <= 6) {
    SideEnumerator left(k_left, 1), right(k_right, 1 + k_left);
    const Shapes none{std::string()};
    const Shapes& ls = k_left ? left.get((1u << k_left) - 1) : none;
    const Shapes& rs = k_right ? right.get((1u << k_right) - 1) : none;
    for (const auto& a : ls)
      for (const auto& b : rs) texts.push_back(assemble(a, b));
  } else {
    Rng rng(seed);
    std::set<std::string> seen;
    std::vector<int> ll, rl;
    for (int i = 0; i < k_left; ++i) ll.push_back(1 + i);
    for (int i = 0; i < k_right; ++i) rl.push_back(1 + k_left + i);
    const long attempts = 20L * budget;
    for (long a = 0; a < attempts && static_cast<int>(seen.size()) < budget; ++a) {
      const std::string l = ll.empty() ? "" : random_side(rng, ll);
      const std::string r = rl.empty() ? "" : random_side(rng, rl);
      seen.insert(assemble(l, r));
    }
    texts.assign(seen.begin(), seen.end());
  }
  std::vector<SkeletonShape> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse_shape(t, k_left, k_right));
  std::sort(out.begin(), out.end(), [](const SkeletonShape& a, const SkeletonShape& b) {
    if (a.tree.size() != b.tree.size()) return a.tree.size() < b.tree.size();
    if (a.hash != b.hash) return a.hash < b.hash;
    return a.canonical < b.canonical;
  });
  if (static_cast<int>(out.size()) > budget) out.resize(static_cast<size_t>(budget));
  return out;
}

std::uint64_t Provenance::hash() const {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t x : {static_cast<std::uint64_t>(repetition), static_cast<std::uint64_t>(guess),
                          static_cast<std::uint64_t>(skeleton), skeleton_hash})
    h = splitmix64(h ^ x);
  return h;
}

CandidateTree attach_clusters(const SkeletonShape& skeleton, const ClusterOutput& clusters, int n) {
  if (n <= 0) throw ReconstructionError("attach_clusters: empty leaf set");
  if (skeleton.k_left != clusters.k_left() || skeleton.k_right != clusters.k_right())
    throw ReconstructionError("attach_clusters: skeleton has " + std::to_string(skeleton.k_left) + "+" +
                              std::to_string(skeleton.k_right) + " anchors but there are " +
                              std::to_string(clusters.k_left()) + "+" + std::to_string(clusters.k_right()) +
                              " clusters");
  const int k = 1 + skeleton.k_left + skeleton.k_right;

  // Anchor label per leaf, resolving left/right duplicates.
  std::vector<int> owner(static_cast<size_t>(n), -1), owner_size(static_cast<size_t>(n), 0);
  CandidateTree cand;
  auto claim = [&](LeafId x, int label, int size, bool right) {
    if (x < 0 || x >= n) throw ReconstructionError("attach_clusters: leaf id out of range");
    auto& o = owner[static_cast<size_t>(x)];
    if (o < 0) {
      o = label;
      owner_size[static_cast<size_t>(x)] = size;
      return;
    }
    const bool owner_right = o > skeleton.k_left;
    if (o == 0 || owner_right == right) throw ReconstructionError("attach_clusters: leaf in two clusters of one side");
    ++cand.provenance.duplicates;
    if (size < owner_size[static_cast<size_t>(x)]) {
      o = label;
      owner_size[static_cast<size_t>(x)] = size;
    }
  };
  for (int i = 0; i < skeleton.k_left; ++i)
    for (LeafId x : clusters.left[static_cast<size_t>(i)])
      claim(x, 1 + i, static_cast<int>(clusters.left[static_cast<size_t>(i)].size()), false);
  for (int i = 0; i < skeleton.k_right; ++i)
    for (LeafId x : clusters.right[static_cast<size_t>(i)])
      claim(x, 1 + skeleton.k_left + i, static_cast<int>(clusters.right[static_cast<size_t>(i)].size()), true);
  for (LeafId x : clusters.leftover) {
    if (x < 0 || x >= n) throw ReconstructionError("attach_clusters: leaf id out of range");
    if (owner[static_cast<size_t>(x)] >= 0) throw ReconstructionError("attach_clusters: leftover leaf is clustered");
    owner[static_cast<size_t>(x)] = 0;
  }
  std::vector<std::vector<LeafId>> members(static_cast<size_t>(k));
  for (LeafId x = 0; x < n; ++x) {
    if (owner[static_cast<size_t>(x)] < 0) throw ReconstructionError("attach_clusters: leaf " + std::to_string(x) + " is unassigned");
    members[static_cast<size_t>(owner[static_cast<size_t>(x)])].push_back(x);
  }

  std::vector<VertexId> parent(static_cast<size_t>(n), kNoVertex);
  VertexId next = n;
  auto fresh = [&] {
    parent.push_back(kNoVertex);
    return next++;
  };
  std::function<VertexId(const std::vector<LeafId>&, size_t, size_t)> balanced = [&](const std::vector<LeafId>& xs,
                                                                                      size_t lo, size_t hi) {
    if (hi - lo == 1) return static_cast<VertexId>(xs[lo]);
    const size_t mid = lo + (hi - lo) / 2;
    const VertexId v = fresh();
    parent[static_cast<size_t>(balanced(xs, lo, mid))] = v;
    parent[static_cast<size_t>(balanced(xs, mid, hi))] = v;
    return v;
  };

  const auto& sk = skeleton.tree;
  std::vector<VertexId> id(sk.size());
  for (size_t i = 0; i < sk.size(); ++i) id[i] = fresh();
  for (size_t i = 0; i < sk.size(); ++i) {
    const auto& inherited = sk.children[i];
    const bool is_anchor = sk.anchor[i];
    const auto& mine = is_anchor ? members[static_cast<size_t>(sk.vertex[i])] : std::vector<LeafId>{};
    VertexId holder = id[i];
    if (!mine.empty() && inherited.size() == 2) {
      holder = fresh();
      parent[static_cast<size_t>(holder)] = id[i];
    }
    for (int c : inherited) parent[static_cast<size_t>(id[static_cast<size_t>(c)])] = holder;
    if (!mine.empty()) parent[static_cast<size_t>(balanced(mine, 0, mine.size()))] = id[i];
  }

  // Drop internal vertices left without leaves below them, then renumber.
  const size_t nv = parent.size();
  std::vector<int> child_count(nv, 0);
  for (size_t v = 0; v < nv; ++v)
    if (parent[v] != kNoVertex) ++child_count[static_cast<size_t>(parent[v])];
  std::vector<bool> dead(nv, false);
  std::vector<VertexId> stack;
  for (size_t v = static_cast<size_t>(n); v < nv; ++v)
    if (child_count[v] == 0) stack.push_back(static_cast<VertexId>(v));
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    dead[static_cast<size_t>(v)] = true;
    const VertexId p = parent[static_cast<size_t>(v)];
    if (p != kNoVertex && --child_count[static_cast<size_t>(p)] == 0) stack.push_back(p);
  }
  const VertexId root = id[0];
  std::vector<VertexId> renum(nv, kNoVertex);
  VertexId k_next = n;
  for (size_t v = 0; v < nv; ++v)
    if (!dead[v]) renum[v] = static_cast<VertexId>(v) < n ? static_cast<VertexId>(v) : k_next++;
  std::vector<VertexId> compact(static_cast<size_t>(k_next), kNoVertex);
  for (size_t v = 0; v < nv; ++v)
    if (!dead[v] && parent[v] != kNoVertex) compact[static_cast<size_t>(renum[v])] = renum[static_cast<size_t>(parent[v])];
  cand.tree = RootedTree(n, renum[static_cast<size_t>(root)], std::move(compact)).unrooted();
  cand.provenance.skeleton_hash = skeleton.hash;
  cand.provenance.skeleton_shape = skeleton.canonical;
  return cand;
}

}  // namespace qed
