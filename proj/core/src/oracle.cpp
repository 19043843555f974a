#include "qed/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace qed {

QuartetOracle::QuartetOracle(PhyloTree hidden, double p, std::uint64_t seed, std::int64_t budget)
    : hidden_(std::move(hidden)), p_(p), rng_(seed), budget_(budget) {
  if (!(p > 0.5 && p <= 1.0)) throw OracleError("oracle: p must lie in (1/2, 1]");
  if (budget <= 0) throw OracleError("oracle: budget must be positive");
}

Quartet QuartetOracle::query(LeafId w, LeafId x, LeafId y, LeafId z) {
  if (count_ >= budget_) throw OracleError("oracle: query budget of " + std::to_string(budget_) + " exhausted");
  ++count_;
  if (logging_) log_.push_back({w, x, y, z});
  const int truth = static_cast<int>(hidden_.topology(w, x, y, z));
  int answer = truth;
  if (p_ < 1.0 && uniform01(rng_) >= p_) answer = (truth + 1 + static_cast<int>(uniform_index(rng_, 2))) % 3;
  switch (answer) {
    case 0: return make_quartet(w, x, y, z);
    case 1: return make_quartet(w, y, x, z);
    default: return make_quartet(w, z, x, y);
  }
}

int vote_repetitions(int n, double p, double delta_conf) {
  if (p >= 1.0) return 1;
  if (!(delta_conf > 0.0 && delta_conf < 1.0)) throw OracleError("oracle: delta_conf must lie in (0,1)");
  // Correct-minus-wrong votes have mean (3p-1)/2 and range 2, so Hoeffding gives a per-comparison
  // failure of 2 exp(-reps (3p-1)^2 / 8). At p = 0.75 and a union bound over n^2 comparisons this
  // closes once reps >= 5.12 ln(2n^2/delta) <= 10.3 ln(n/delta).
  constexpr double kVotes = 10.3;
  return static_cast<int>(std::ceil(kVotes * std::log(n / delta_conf)));
}

namespace {

// Rooted tree over the inserted leaves, hanging below the pivot.
struct Growing {
  std::vector<int> parent;
  std::vector<std::array<int, 2>> kids;
  std::vector<LeafId> leaf;  // -1 for internal vertices
  std::vector<LeafId> rep;   // some leaf below each vertex
  int root = -1;

  int add(LeafId l) {
    parent.push_back(-1);
    kids.push_back({-1, -1});
    leaf.push_back(l);
    rep.push_back(l);
    return static_cast<int>(leaf.size()) - 1;
  }
  bool internal(int v) const { return leaf[static_cast<size_t>(v)] < 0; }

  // New leaf on the edge above e.
  void insert_above(int e, LeafId l) {
    const int x = add(l);
    const int w = add(-1);
    rep[static_cast<size_t>(w)] = rep[static_cast<size_t>(e)];
    const int p = parent[static_cast<size_t>(e)];
    parent[static_cast<size_t>(w)] = p;
    if (p < 0) root = w;
    else {
      auto& pk = kids[static_cast<size_t>(p)];
      (pk[0] == e ? pk[0] : pk[1]) = w;
    }
    kids[static_cast<size_t>(w)] = {e, x};
    parent[static_cast<size_t>(e)] = w;
    parent[static_cast<size_t>(x)] = w;
  }
};

}  // namespace

AdaptiveResult adaptive_reconstruct(QuartetOracle& oracle, double delta_conf, std::uint64_t seed) {
  const int n = oracle.leaf_count();
  if (n < 4) throw OracleError("adaptive_reconstruct needs n >= 4");
  const int reps = vote_repetitions(n, oracle.p(), delta_conf);

  std::vector<LeafId> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  Rng rng(seed);
  for (size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[uniform_index(rng, i + 1)]);
  const LeafId r = order[0];

  // 0: x pairs with a, 1: x pairs with b, 2: a pairs with b (as seen from r).
  auto triplet = [&](LeafId x, LeafId a, LeafId b) {
    int votes[3] = {0, 0, 0};
    for (int k = 0; k < reps; ++k) {
      const Quartet q = oracle.query(r, x, a, b);
      const LeafId mate = q.a == r ? q.b : q.b == r ? q.a : q.c == r ? q.d : q.c;
      ++votes[mate == x ? 2 : mate == a ? 1 : 0];
    }
    return static_cast<int>(std::max_element(votes, votes + 3) - votes);
  };

  Growing g;
  const int first = g.add(order[1]);
  g.root = first;
  g.insert_above(first, order[2]);

  std::vector<char> in_region;
  std::vector<int> cnt, stack, members;
  for (size_t t = 3; t < order.size(); ++t) {
    const LeafId x = order[t];
    const size_t nv = g.leaf.size();
    in_region.assign(nv, 1);
    cnt.assign(nv, 0);
    int top = g.root;

    auto collect = [&](int from) {  // region vertices below `from`, preorder
      members.clear();
      stack.assign(1, from);
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (!in_region[static_cast<size_t>(v)]) continue;
        members.push_back(v);
        if (g.internal(v))
          for (int c : g.kids[static_cast<size_t>(v)]) stack.push_back(c);
      }
    };

    while (true) {
      collect(top);
      if (members.size() == 1) break;
      for (auto it = members.rbegin(); it != members.rend(); ++it) {
        const int v = *it;
        int s = 1;
        if (g.internal(v))
          for (int c : g.kids[static_cast<size_t>(v)])
            if (in_region[static_cast<size_t>(c)]) s += cnt[static_cast<size_t>(c)];
        cnt[static_cast<size_t>(v)] = s;
      }
      const int total = cnt[static_cast<size_t>(top)];
      int best = -1, best_max = total + 1;
      for (int v : members) {
        if (!g.internal(v)) continue;
        const auto& k = g.kids[static_cast<size_t>(v)];
        const int s1 = in_region[static_cast<size_t>(k[0])] ? cnt[static_cast<size_t>(k[0])] : 0;
        const int s2 = in_region[static_cast<size_t>(k[1])] ? cnt[static_cast<size_t>(k[1])] : 0;
        if (s1 + s2 == 0) continue;
        const int worst = std::max({s1, s2, total - s1 - s2});
        if (worst < best_max) {
          best_max = worst;
          best = v;
        }
      }
      const auto k = g.kids[static_cast<size_t>(best)];
      int ans = triplet(x, g.rep[static_cast<size_t>(k[0])], g.rep[static_cast<size_t>(k[1])]);
      // A vote pointing into an already excluded child can only come from noise.
      if (ans < 2 && !in_region[static_cast<size_t>(k[static_cast<size_t>(ans)])]) ans = 2;
      if (ans < 2) {
        const int keep = k[static_cast<size_t>(ans)];
        const std::vector<int> old = members;
        collect(keep);
        for (int v : old) in_region[static_cast<size_t>(v)] = 0;
        for (int v : members) in_region[static_cast<size_t>(v)] = 1;
        top = keep;
      } else {
        for (int c : k) {
          collect(c);
          for (int v : members) in_region[static_cast<size_t>(v)] = 0;
        }
      }
    }
    g.insert_above(members[0], x);
  }

  // Internal vertices get ids n, n+1, ...; the pivot hangs off the root.
  std::vector<VertexId> id(g.leaf.size());
  VertexId next = n;
  for (size_t v = 0; v < g.leaf.size(); ++v) id[v] = g.leaf[v] >= 0 ? g.leaf[v] : next++;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (size_t v = 0; v < g.leaf.size(); ++v)
    if (g.parent[v] >= 0) edges.emplace_back(id[static_cast<size_t>(g.parent[v])], id[v]);
  edges.emplace_back(r, id[static_cast<size_t>(g.root)]);

  AdaptiveResult res;
  res.tree = PhyloTree(n, edges);
  res.pivot = r;
  res.queries = oracle.queries();
  return res;
}

}  // namespace qed
