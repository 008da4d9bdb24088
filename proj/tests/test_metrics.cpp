#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mogfn/metrics.hpp"

using namespace mogfn;

namespace {

Front front_of(std::vector<ObjectiveVector> pts) {
  Front f;
  f.points = std::move(pts);
  return f;
}

Front random_front(int n, int d, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<ObjectiveVector> pts;
  for (int i = 0; i < n; ++i) {
    std::vector<double> v;
    for (int j = 0; j < d; ++j) v.push_back(unit(rng));
    pts.push_back(ObjectiveVector(v));
  }
  return front_of(std::move(pts));
}

Candidate cand(std::string text, ObjectiveVector obj) {
  Candidate c;
  c.text = text;
  for (char ch : text) c.payload.push_back(ch);
  c.objectives = std::move(obj);
  return c;
}

}  // namespace

TEST_CASE("hypervolume tabulated values") {
  HvRef ref = HvRef::origin(2);
  CHECK(hypervolume(front_of({{1.0, 1.0}}), ref) == doctest::Approx(1.0));
  CHECK(hypervolume(front_of({{0.5, 1.0}, {1.0, 0.5}}), ref) == doctest::Approx(0.75));
  CHECK(hypervolume(Front{}, ref) == 0.0);
  CHECK_THROWS_AS(hypervolume(front_of({{1, 1, 1, 1, 1, 1}}), HvRef::origin(6)),
                  std::invalid_argument);
}

TEST_CASE("hypervolume ignores dominated points, duplicates and ordering") {
  HvRef ref = HvRef::origin(2);
  Front base = front_of({{0.5, 1.0}, {1.0, 0.5}});
  Front messy = front_of({{1.0, 0.5}, {0.2, 0.2}, {0.5, 1.0}, {0.5, 1.0}});
  CHECK(hypervolume(messy, ref) == doctest::Approx(hypervolume(base, ref)));

  Front plus = base;
  plus.points.push_back({0.8, 0.8});
  CHECK(hypervolume(plus, ref) >= hypervolume(base, ref));

  Front dominated = base;
  dominated.points.push_back({0.4, 0.4});
  CHECK(hypervolume(dominated, ref) == doctest::Approx(hypervolume(base, ref)));
}

TEST_CASE("exact hypervolume agrees with the Monte Carlo oracle") {
  Rng rng(2024);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 3; ++trial) {
      Front f = random_front(12, d, rng);
      HvRef ref = HvRef::origin(d);
      double exact = hypervolume(f, ref);
      const int samples = 200000;
      double mc = mc_hypervolume_oracle(f, ref, samples, rng);
      // 3 sigma of the binomial estimate within the sampling box.
      double box = 1.0;
      std::vector<double> hi(static_cast<std::size_t>(d), 0.0);
      for (const auto& p : f.points) {
        for (int i = 0; i < d; ++i) {
          hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)], p[i]);
        }
      }
      for (double h : hi) box *= h;
      double p_hat = mc / box;
      double sigma = box * std::sqrt(std::max(p_hat * (1 - p_hat), 1e-12) / samples);
      CHECK(std::abs(exact - mc) < 3.0 * sigma + 1e-9);
    }
  }
}

TEST_CASE("hypervolume in 4 and 5 dimensions against the oracle") {
  Rng rng(77);
  for (int d : {4, 5}) {
    Front f = random_front(8, d, rng);
    HvRef ref = HvRef::origin(d);
    double exact = hypervolume(f, ref);
    double mc = mc_hypervolume_oracle(f, ref, 200000, rng);
    CHECK(exact == doctest::Approx(mc).epsilon(0.05));
  }
}

TEST_CASE("mc oracle edge cases") {
  Rng rng(5);
  CHECK(mc_hypervolume_oracle(front_of({{1.0, 1.0}}), HvRef::origin(2), 1000, rng) ==
        doctest::Approx(1.0));
  CHECK(mc_hypervolume_oracle(Front{}, HvRef::origin(2), 1000, rng) == 0.0);
}

TEST_CASE("reference vectors: Das-Dennis lattice") {
  auto set = uniform_reference_vectors(2, 2);
  REQUIRE(set.vectors.size() == 3);
  CHECK(set.vectors[0] == Preference{1.0, 0.0});
  CHECK(set.vectors[1] == Preference{0.5, 0.5});
  CHECK(set.vectors[2] == Preference{0.0, 1.0});

  auto big = uniform_reference_vectors(3, 4);
  CHECK(big.vectors.size() == 15);
  CHECK(static_cast<std::int64_t>(big.vectors.size()) == binomial(4 + 3 - 1, 3 - 1));
  for (const auto& v : big.vectors) {
    double sum = 0.0;
    for (double x : v.weights) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("r2 indicator") {
  auto refs = uniform_reference_vectors(2, 1);  // {(1,0),(0,1)}
  REQUIRE(refs.vectors.size() == 2);
  CHECK(r2_indicator(front_of({{1.0, 1.0}}), refs) == doctest::Approx(0.0));
  CHECK(r2_indicator(front_of({{0.5, 0.5}}), refs) == doctest::Approx(0.5));
  CHECK_THROWS_AS(r2_indicator(Front{}, refs), std::invalid_argument);

  Front augmented = front_of({{0.5, 0.5}, {0.9, 0.1}});
  CHECK(r2_indicator(augmented, refs) <= r2_indicator(front_of({{0.5, 0.5}}), refs) + 1e-12);
}

TEST_CASE("gd+ deficits") {
  Front truth = front_of({{0.5, 0.5}});
  CHECK(gd_plus(truth, truth) == doctest::Approx(0.0));
  CHECK(gd_plus(front_of({{1.0, 1.0}}), truth) == doctest::Approx(0.0));
  CHECK(gd_plus(front_of({{0.5, 1.0}}), front_of({{1.0, 1.0}})) == doctest::Approx(0.5));
  CHECK_THROWS_AS(gd_plus(Front{}, truth), std::invalid_argument);
  CHECK_THROWS_AS(gd_plus(truth, Front{}), std::invalid_argument);
}

TEST_CASE("edit distance") {
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("abc", "abc") == 0);

  Rng rng(31);
  std::uniform_int_distribution<int> len(0, 8);
  std::uniform_int_distribution<int> letter(0, 2);
  auto random_string = [&] {
    std::string s;
    int n = len(rng);
    for (int i = 0; i < n; ++i) s += static_cast<char>('a' + letter(rng));
    return s;
  };
  for (int trial = 0; trial < 300; ++trial) {
    std::string a = random_string(), b = random_string(), c = random_string();
    CHECK(edit_distance(a, a) == 0);
    CHECK(edit_distance(a, b) == edit_distance(b, a));
    CHECK(edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c));
    if (a != b) CHECK(edit_distance(a, b) > 0);
  }
}

TEST_CASE("top-k reward") {
  Scalarization ws;
  std::vector<Preference> prefs{Preference{1.0}};
  SUBCASE("identical candidates") {
    std::vector<std::vector<Candidate>> sets{{cand("x", {0.7}), cand("y", {0.7})}};
    CHECK(topk_reward(sets, prefs, ws, 2) == doctest::Approx(0.7));
  }
  SUBCASE("hand-computed top-2 of three") {
    std::vector<std::vector<Candidate>> sets{
        {cand("a", {0.1}), cand("b", {0.5}), cand("c", {0.9})}};
    CHECK(topk_reward(sets, prefs, ws, 2) == doctest::Approx(0.7));
    CHECK(topk_reward(sets, prefs, ws, 3) == doctest::Approx(0.5));  // k = N mean
  }
  SUBCASE("permutation invariance") {
    std::vector<std::vector<Candidate>> sets{
        {cand("c", {0.9}), cand("a", {0.1}), cand("b", {0.5})}};
    CHECK(topk_reward(sets, prefs, ws, 2) == doctest::Approx(0.7));
  }
  SUBCASE("set smaller than k throws") {
    std::vector<std::vector<Candidate>> sets{{cand("a", {0.1})}};
    CHECK_THROWS_AS(topk_reward(sets, prefs, ws, 2), std::invalid_argument);
  }
}

TEST_CASE("top-k diversity") {
  Scalarization ws;
  std::vector<Preference> prefs{Preference{1.0}};
  SUBCASE("identical sequences have zero diversity") {
    std::vector<std::vector<Candidate>> sets{
        {cand("AAAA", {0.5}), cand("AAAA", {0.5}), cand("AAAA", {0.5})}};
    CHECK(topk_diversity(sets, prefs, ws, 3, PayloadDistance::Edit) == doctest::Approx(0.0));
  }
  SUBCASE("single substitution") {
    std::vector<std::vector<Candidate>> sets{{cand("AAAA", {0.5}), cand("AAAB", {0.5})}};
    CHECK(topk_diversity(sets, prefs, ws, 2, PayloadDistance::Edit) == doctest::Approx(1.0));
  }
  SUBCASE("hand-computed pairwise mean") {
    std::vector<std::vector<Candidate>> sets{
        {cand("AB", {0.5}), cand("CD", {0.5}), cand("AD", {0.5})}};
    CHECK(topk_diversity(sets, prefs, ws, 3, PayloadDistance::Edit) ==
          doctest::Approx(4.0 / 3.0));
  }
  SUBCASE("k below 2 throws") {
    std::vector<std::vector<Candidate>> sets{{cand("AB", {0.5}), cand("CD", {0.5})}};
    CHECK_THROWS_AS(topk_diversity(sets, prefs, ws, 1, PayloadDistance::Edit),
                    std::invalid_argument);
  }
  SUBCASE("grid cells use L1 distance") {
    Candidate a, b;
    a.payload = {0, 0};
    b.payload = {2, 3};
    a.objectives = ObjectiveVector{0.5};
    b.objectives = ObjectiveVector{0.5};
    std::vector<std::vector<Candidate>> sets{{a, b}};
    CHECK(topk_diversity(sets, prefs, ws, 2, PayloadDistance::L1Cell) == doctest::Approx(5.0));
  }
}
