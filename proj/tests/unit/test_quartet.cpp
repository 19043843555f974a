#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "qed/quartet.hpp"
#include "qed/rng.hpp"

using namespace qed;

namespace {

// Split index over the sorted 4-set: 0 = wx|yz, 1 = wy|xz, 2 = wz|xy.
int split_index(const Quartet& q) {
  std::array<LeafId, 4> s{q.a, q.b, q.c, q.d};
  std::sort(s.begin(), s.end());
  if (make_quartet(s[0], s[1], s[2], s[3]) == q) return 0;
  if (make_quartet(s[0], s[2], s[1], s[3]) == q) return 1;
  return 2;
}

}  // namespace

TEST_CASE("canonical quartets") {
  CHECK(make_quartet(5, 2, 9, 1) == Quartet{1, 9, 2, 5});
  CHECK(make_quartet(1, 9, 2, 5) == make_quartet(2, 5, 9, 1));
  auto t = random_tree(10, 4);
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j)
      for (int k = j + 1; k < 10; ++k)
        for (int l = k + 1; l < 10; ++l) {
          auto q = tree_quartet(t, l, j, i, k);
          CHECK(satisfies(t, q));
          CHECK(q.a < q.b);
          CHECK(q.c < q.d);
          CHECK(q.a < q.c);
        }
}

TEST_CASE("4-subset unranking is a bijection") {
  for (int n : {4, 5, 8, 13}) {
    std::set<std::array<LeafId, 4>> seen;
    for (std::uint64_t i = 0; i < choose4(static_cast<std::uint64_t>(n)); ++i) {
      auto s = unrank_4subset(i, n);
      CHECK(s[0] < s[1]);
      CHECK(s[1] < s[2]);
      CHECK(s[2] < s[3]);
      CHECK(s[3] < n);
      seen.insert(s);
    }
    CHECK(seen.size() == choose4(static_cast<std::uint64_t>(n)));
  }
  CHECK(choose4(1000) == 41417124750ULL);
  auto big = unrank_4subset(choose4(1000) - 1, 1000);
  CHECK(big == std::array<LeafId, 4>{996, 997, 998, 999});
  CHECK_THROWS_AS(unrank_4subset(70, 8), QuartetError);
}

TEST_CASE("rcn sampling") {
  auto t = random_tree(20, 1);
  SUBCASE("noiseless") {
    auto s = sample_rcn(t, 5000, 0.0, 3);
    CHECK(s.size() == 5000);
    for (const auto& q : s.quartets) REQUIRE(satisfies(t, q));
  }
  SUBCASE("empty") { CHECK(sample_rcn(t, 0, 0.1, 3).size() == 0); }
  SUBCASE("near the uniform boundary") {
    const double eta = 2.0 / 3.0 - 0.01;
    const int m = 100000;
    auto s = sample_rcn(t, m, eta, 5);
    int correct = 0;
    for (const auto& q : s.quartets) correct += satisfies(t, q);
    const double p = 1.0 - eta, sigma = std::sqrt(p * (1 - p) / m);
    CHECK(std::abs(correct / double(m) - p) <= 3 * sigma);
  }
  SUBCASE("wrong splits are equally likely") {
    const int m = 40000;
    auto s = sample_rcn(t, m, 0.4, 8);
    int low = 0, high = 0;
    for (const auto& q : s.quartets) {
      if (satisfies(t, q)) continue;
      auto truth = split_index(tree_quartet(t, q.a, q.b, q.c, q.d));
      int wrong = split_index(q);
      int other = 3 - truth - wrong;
      (wrong < other ? low : high) += 1;
    }
    const double e = (low + high) / 2.0;
    const double chi2 = (low - e) * (low - e) / e + (high - e) * (high - e) / e;
    CHECK(chi2 < 9.0);
  }
  CHECK(sample_rcn(t, 100, 0.2, 9).quartets == sample_rcn(t, 100, 0.2, 9).quartets);
  CHECK_THROWS_AS(sample_rcn(t, 10, 2.0 / 3.0, 1), QuartetError);
  CHECK_THROWS_AS(sample_rcn(t, -1, 0.1, 1), QuartetError);
}

TEST_CASE("poisson sampling mean") {
  const int n = 40;
  auto t = random_tree(n, 2);
  const double lambda = 2.0 / (n * n * n);
  const double mean = lambda * static_cast<double>(choose4(n));
  double sum = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    auto q = sample_poisson(t, lambda, 0.1, static_cast<std::uint64_t>(s));
    sum += static_cast<double>(q.size());
  }
  CHECK(std::abs(sum / seeds - mean) <= 3 * std::sqrt(mean / seeds));
  auto clean = sample_poisson(t, lambda, 0.0, 77);
  for (const auto& q : clean.quartets) CHECK(satisfies(t, q));
  CHECK(sample_poisson(t, 1e-9, 0.0, 1).size() <= 2);
  CHECK_THROWS_AS(sample_poisson(t, 0.0, 0.1, 1), QuartetError);
}

TEST_CASE("rcn to poisson conversion") {
  const int n = 12;
  auto t = random_tree(n, 3);
  const double lambda = 50.0 / static_cast<double>(choose4(n));
  auto pool = sample_rcn(t, 200, 0.1, 4);
  double sum = 0, sq = 0;
  const int reps = 1000;
  for (int s = 0; s < reps; ++s) {
    auto p = rcn_to_poisson(pool, lambda, static_cast<std::uint64_t>(s));
    CHECK(p.size() <= 200);
    CHECK(p.model == SampleModel::Poisson);
    sum += static_cast<double>(p.size());
    sq += static_cast<double>(p.size()) * static_cast<double>(p.size());
  }
  const double mean = sum / reps, var = sq / reps - mean * mean;
  CHECK(std::abs(mean - 50.0) <= 3 * std::sqrt(50.0 / reps));
  // Var of the sample variance for Poisson(50) is about 2*50^2/reps.
  CHECK(std::abs(var - 50.0) <= 3 * std::sqrt(2.0 * 2500 / reps + 50.0 / reps));
  CHECK(rcn_to_poisson(pool, lambda, 5).quartets == rcn_to_poisson(pool, lambda, 5).quartets);
  CHECK_THROWS_AS(rcn_to_poisson(pool, 0.0, 1), QuartetError);
  CHECK_THROWS_AS(rcn_to_poisson(sample_rcn(t, 99, 0.1, 4), lambda, 1), QuartetError);
}

TEST_CASE("quartet file round trip") {
  auto t = random_tree(9, 5);
  auto labels = LabelTable::numbered(9);
  auto s = sample_rcn(t, 50, 0.25, 6);
  std::stringstream ss;
  write_quartets(ss, s, labels);
  auto f = read_quartets(ss);
  CHECK(f.labels == labels);
  CHECK(f.sample.quartets == s.quartets);
  CHECK(f.sample.eta == s.eta);
  CHECK(f.sample.seed == 6);
  CHECK(f.sample.model == SampleModel::Rcn);

  std::stringstream bare("eta=0 model=rcn seed=1\n# comment\nt0 t1 | t2 t3\n");
  CHECK_THROWS_AS(read_quartets(bare), QuartetError);
  std::stringstream bare2("eta=0 model=rcn seed=1\nt3 t1 | t2 t0\n");
  auto g = read_quartets(bare2, &labels);
  CHECK(g.sample.quartets[0] == Quartet{0, 2, 1, 3});
  std::stringstream bad("eta=0 model=rcn seed=1\nt0 t1 t2 t3\n");
  CHECK_THROWS_AS(read_quartets(bad, &labels), QuartetError);
  std::stringstream noheader("t0 t1 | t2 t3\n");
  CHECK_THROWS_AS(read_quartets(noheader, &labels), QuartetError);
}
