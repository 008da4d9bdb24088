#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "mogfn/core.hpp"

using namespace mogfn;

namespace {

// Brute-force oracle, written independently of the library path: a point
// survives iff no other point is >= everywhere and > somewhere.
std::vector<ObjectiveVector> oracle_front(const std::vector<ObjectiveVector>& pts) {
  std::vector<ObjectiveVector> unique;
  for (const auto& p : pts) {
    bool seen = false;
    for (const auto& q : unique) {
      if (q.values == p.values) seen = true;
    }
    if (!seen) unique.push_back(p);
  }
  std::vector<ObjectiveVector> out;
  for (const auto& p : unique) {
    bool dominated = false;
    for (const auto& q : unique) {
      bool ge = true, gt = false;
      for (int i = 0; i < p.dim(); ++i) {
        if (q[i] < p[i]) ge = false;
        if (q[i] > p[i]) gt = true;
      }
      if (ge && gt) dominated = true;
    }
    if (!dominated) out.push_back(p);
  }
  return out;
}

std::vector<ObjectiveVector> random_points(int n, int d, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ObjectiveVector> pts;
  for (int i = 0; i < n; ++i) {
    std::vector<double> v;
    for (int j = 0; j < d; ++j) v.push_back(unit(rng));
    pts.push_back(ObjectiveVector(v));
  }
  return pts;
}

}  // namespace

TEST_CASE("dominates basic cases") {
  CHECK(dominates({1.0, 1.0}, {0.0, 1.0}));
  CHECK_FALSE(dominates({1.0, 0.0}, {0.0, 1.0}));
  CHECK_FALSE(dominates({0.5, 0.5}, {0.5, 0.5}));
  CHECK_THROWS_AS(dominates({1.0}, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("dominates is irreflexive and antisymmetric") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto pts = random_points(2, 3, rng);
    CHECK_FALSE(dominates(pts[0], pts[0]));
    if (dominates(pts[0], pts[1])) {
      CHECK_FALSE(dominates(pts[1], pts[0]));
    }
  }
}

TEST_CASE("nondominated_filter keeps exactly the Pareto points") {
  std::vector<ObjectiveVector> pts = {{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}, {0.2, 0.2}};
  Front f = nondominated_filter(pts);
  REQUIRE(f.size() == 3);
  CHECK(f.points[0] == ObjectiveVector{1.0, 0.0});
  CHECK(f.points[1] == ObjectiveVector{0.0, 1.0});
  CHECK(f.points[2] == ObjectiveVector{0.5, 0.5});

  Front single = nondominated_filter({{1.0, 1.0}});
  REQUIRE(single.size() == 1);

  CHECK(nondominated_filter({}).empty());
}

TEST_CASE("nondominated_filter deduplicates and preserves input order") {
  std::vector<ObjectiveVector> pts = {{0.5, 0.5}, {0.7, 0.2}, {0.5, 0.5}, {0.2, 0.7}};
  Front f = nondominated_filter(pts);
  REQUIRE(f.size() == 3);
  CHECK(f.points[0] == ObjectiveVector{0.5, 0.5});
  CHECK(f.points[1] == ObjectiveVector{0.7, 0.2});
  CHECK(f.points[2] == ObjectiveVector{0.2, 0.7});
}

TEST_CASE("nondominated_filter matches the pairwise oracle on random 3-D points") {
  Rng rng(1234);
  auto pts = random_points(50, 3, rng);
  Front f = nondominated_filter(pts);
  auto expected = oracle_front(pts);
  REQUIRE(f.points.size() == expected.size());
  for (const auto& p : expected) {
    bool found = false;
    for (const auto& q : f.points) {
      if (q == p) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("nondominated_filter is idempotent and removals are justified") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    auto pts = random_points(30, 2, rng);
    Front once = nondominated_filter(pts);
    Front twice = nondominated_filter(once.points);
    CHECK(once.points == twice.points);
    for (const auto& p : pts) {
      bool kept = false;
      for (const auto& q : once.points) {
        if (q == p) kept = true;
      }
      if (kept) continue;
      bool justified = false;
      for (const auto& q : once.points) {
        if (dominates(q, p) || q == p) justified = true;
      }
      CHECK(justified);
    }
  }
}

TEST_CASE("objective and preference validation") {
  ObjectiveVector empty;
  ObjectiveVector out_of_range{1.5, 0.0};
  ObjectiveVector ok{0.0, 1.0};
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  CHECK_THROWS_AS(out_of_range.validate(), std::invalid_argument);
  CHECK_NOTHROW(ok.validate());
  Preference simplex{0.25, 0.75};
  Preference bad_sum{0.5, 0.6};
  Preference negative{-0.1, 1.1};
  CHECK_NOTHROW(simplex.validate());
  CHECK_THROWS_AS(bad_sum.validate(), std::invalid_argument);
  CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
}

TEST_CASE("front CSV round trip") {
  Front f;
  f.points = {{0.125, 1.0}, {0.3333333333333333, 0.7}};
  f.payloads = {"3,4", "seq \"X\""};
  auto path = std::filesystem::temp_directory_path() / "mogfn_front_test.csv";
  write_front_csv(f, path.string());
  Front back = read_front_csv(path.string());
  REQUIRE(back.points.size() == 2);
  CHECK(back.points[0] == f.points[0]);
  CHECK(back.points[1] == f.points[1]);
  REQUIRE(back.payloads.size() == 2);
  CHECK(back.payloads[0] == "3,4");
  CHECK(back.payloads[1] == "seq \"X\"");
  std::filesystem::remove(path);
}
