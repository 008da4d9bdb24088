#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mogfn/env.hpp"

using namespace mogfn;

namespace {

// Forward-enumerates the whole reachable DAG and records, for every state,
// the (parent, action) pairs seen while expanding. Oracle for parents().
struct DagOracle {
  std::map<EnvState, std::set<std::pair<EnvState, int>>> incoming;
  std::vector<EnvState> states;

  explicit DagOracle(const Env& env) {
    std::set<EnvState> seen;
    std::vector<EnvState> stack{env.initial_state()};
    seen.insert(stack.back());
    while (!stack.empty()) {
      EnvState s = stack.back();
      stack.pop_back();
      states.push_back(s);
      if (env.is_terminal(s)) continue;
      for (int a : env.valid_actions(s)) {
        EnvState next = env.apply(s, a);
        incoming[next].insert({s, a});
        if (seen.insert(next).second) stack.push_back(next);
      }
    }
  }
};

// Counts distinct action sequences from the root to each terminal by brute
// recursion. Oracle for the lattice-path identity.
void count_paths(const Env& env, const EnvState& s, std::map<EnvState, long>& out) {
  if (env.is_terminal(s)) {
    out[s] += 1;
    return;
  }
  for (int a : env.valid_actions(s)) {
    count_paths(env, env.apply(s, a), out);
  }
}

long binom(int n, int k) {
  double prod = 1.0;
  for (int i = 1; i <= k; ++i) prod *= static_cast<double>(n + 1 - i) / i;
  return std::lround(prod);
}

// Independent re-statements of the published closed forms used by the grid.
double oracle_branin(double x1, double x2) {
  double pi = 3.14159265358979323846;
  return std::pow(x2 - 5.1 * x1 * x1 / (4 * pi * pi) + 5 * x1 / pi - 6.0, 2.0) +
         10.0 * (1.0 - 1.0 / (8.0 * pi)) * std::cos(x1) + 10.0;
}

double oracle_currin(double x1, double x2) {
  double f = x2 == 0.0 ? 1.0 : 1.0 - std::exp(-0.5 / x2);
  return f * (2300 * std::pow(x1, 3) + 1900 * x1 * x1 + 2092 * x1 + 60) /
         (100 * std::pow(x1, 3) + 500 * x1 * x1 + 4 * x1 + 20);
}

}  // namespace

TEST_CASE("hypergrid dynamics") {
  HyperGridEnv env(HyperGridConfig{4, {GridObjective::Brannin, GridObjective::Currin}});
  SUBCASE("scripted walk reaches (1,1)") {
    EnvState s = env.initial_state();
    s = env.apply(s, HyperGridEnv::kActionIncrement0);
    s = env.apply(s, HyperGridEnv::kActionIncrement1);
    s = env.apply(s, HyperGridEnv::kActionStop);
    CHECK(s.terminal);
    CHECK(s.tokens == std::vector<int>{1, 1});
  }
  SUBCASE("far corner only stops") {
    EnvState corner{{3, 3}, false};
    CHECK(env.valid_actions(corner) == std::vector<int>{HyperGridEnv::kActionStop});
    CHECK_THROWS_AS(env.apply(corner, HyperGridEnv::kActionIncrement0),
                    std::invalid_argument);
  }
  SUBCASE("encoding is a pair of one-hots") {
    std::vector<double> enc;
    env.state_encoding(env.initial_state(), enc);
    REQUIRE(enc.size() == 8);
    CHECK(enc[0] == 1.0);
    CHECK(enc[4] == 1.0);
    double sum = 0.0;
    for (double v : enc) sum += v;
    CHECK(sum == 2.0);
  }
}

TEST_CASE("hypergrid trajectory counts follow the lattice-path identity") {
  for (int side : {2, 3, 5}) {
    HyperGridEnv env(HyperGridConfig{side, {GridObjective::Brannin, GridObjective::Currin}});
    std::map<EnvState, long> paths;
    count_paths(env, env.initial_state(), paths);
    for (const auto& [state, count] : paths) {
      int i = state.tokens[0], j = state.tokens[1];
      CHECK(count == binom(i + j, i));
    }
  }
}

TEST_CASE("hypergrid parents invert apply") {
  HyperGridEnv env(HyperGridConfig{4, {GridObjective::Sphere, GridObjective::Beale}});
  DagOracle oracle(env);
  for (const auto& s : oracle.states) {
    auto claimed = env.parents(s);
    std::set<std::pair<EnvState, int>> claimed_set(claimed.begin(), claimed.end());
    auto it = oracle.incoming.find(s);
    if (it == oracle.incoming.end()) {
      CHECK(claimed.empty());
    } else {
      CHECK(claimed_set == it->second);
    }
    for (const auto& [parent, action] : claimed) {
      CHECK(env.apply(parent, action) == s);
    }
  }
}

TEST_CASE("hypergrid objectives are min-max normalized per objective") {
  std::vector<GridObjective> all = {GridObjective::Brannin, GridObjective::Currin,
                                    GridObjective::Sphere, GridObjective::Shubert,
                                    GridObjective::Beale};
  HyperGridEnv env(HyperGridConfig{8, all});
  for (int k = 0; k < 5; ++k) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        double v = env.cell_objectives(i, j)[k];
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(1.0));
  }
}

TEST_CASE("sphere objective peaks at the cell mapping to the origin") {
  // H = 5 puts u = 0.5 on the lattice, which maps to the sphere minimum.
  HyperGridEnv env(HyperGridConfig{5, {GridObjective::Sphere, GridObjective::Currin}});
  CHECK(env.cell_objectives(2, 2)[0] == doctest::Approx(1.0));
}

TEST_CASE("hypergrid table matches an independent formula evaluation") {
  const int h = 8;
  HyperGridEnv env(HyperGridConfig{h, {GridObjective::Brannin, GridObjective::Currin}});
  for (int k = 0; k < 2; ++k) {
    std::vector<double> negated;
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < h; ++j) {
        double u0 = i / 7.0, u1 = j / 7.0;
        double raw = k == 0 ? oracle_branin(-5.0 + 15.0 * u0, 15.0 * u1)
                            : oracle_currin(u0, u1);
        negated.push_back(-raw);
      }
    }
    double lo = *std::min_element(negated.begin(), negated.end());
    double hi = *std::max_element(negated.begin(), negated.end());
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < h; ++j) {
        double expected = (negated[static_cast<std::size_t>(i) * h + j] - lo) / (hi - lo);
        CHECK(env.cell_objectives(i, j)[k] == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("ngram counting") {
  CHECK(ngram_counts("ABABC", {"AB", "BA"}) == std::vector<int>{2, 1});
  CHECK(ngram_counts("", {"AB", "BA"}) == std::vector<int>{0, 0});
  CHECK(ngram_counts("ACACVA", {"AC", "CV", "VA"}) == std::vector<int>{2, 1, 1});
  CHECK(ngram_counts("AAA", {"AA"}) == std::vector<int>{2});  // overlapping
}

TEST_CASE("ngram objectives") {
  SUBCASE("unigram saturation") {
    NGramsEnv env(NGramsConfig{36, {"A"}, kAminoCount});
    EnvState s{std::vector<int>(36, 0), true};
    CHECK(env.objectives(s)[0] == doctest::Approx(1.0));
  }
  SUBCASE("no occurrences") {
    NGramsEnv env(NGramsConfig{36, {"AC"}, kAminoCount});
    EnvState s{std::vector<int>(10, 5), true};
    CHECK(env.objectives(s)[0] == doctest::Approx(0.0));
  }
  SUBCASE("alternating bigram") {
    NGramsEnv env(NGramsConfig{36, {"AC"}, kAminoCount});
    std::vector<int> tokens;
    for (int i = 0; i < 18; ++i) {
      tokens.push_back(string_to_tokens("A")[0]);
      tokens.push_back(string_to_tokens("C")[0]);
    }
    EnvState s{tokens, true};
    CHECK(env.objectives(s)[0] == doctest::Approx(18.0 / 35.0));
  }
}

TEST_CASE("ngrams terminal census by enumeration") {
  // |A| + |A|^2 terminals for max_len = 2: each length-1 string terminates
  // via EOS, each length-2 string terminates by construction.
  NGramsEnv small(NGramsConfig{2, {"A"}, 2});
  CHECK(enumerate_terminals(small).size() == 2 + 4);
  NGramsEnv full(NGramsConfig{2, {"A"}, kAminoCount});
  CHECK(enumerate_terminals(full).size() == 20 + 400);
}

TEST_CASE("ngrams is a tree: parents invert apply with multiplicity one") {
  NGramsEnv env(NGramsConfig{4, {"AR"}, 3});
  DagOracle oracle(env);
  for (const auto& s : oracle.states) {
    auto claimed = env.parents(s);
    auto it = oracle.incoming.find(s);
    if (it == oracle.incoming.end()) {
      CHECK(claimed.empty());
    } else {
      REQUIRE(claimed.size() == it->second.size());
      std::set<std::pair<EnvState, int>> claimed_set(claimed.begin(), claimed.end());
      CHECK(claimed_set == it->second);
      CHECK(claimed.size() == 1);  // tree
    }
    for (const auto& [parent, action] : claimed) {
      CHECK(env.apply(parent, action) == s);
    }
  }
}

TEST_CASE("ngrams encoding has constant size and a length feature") {
  NGramsEnv env(NGramsConfig{6, {"AC"}, kAminoCount});
  std::vector<double> enc;
  env.state_encoding(env.initial_state(), enc);
  REQUIRE(static_cast<int>(enc.size()) == env.encoding_size());
  for (double v : enc) CHECK(v == 0.0);

  EnvState s = env.apply(env.initial_state(), 0);
  std::vector<double> enc2;
  env.state_encoding(s, enc2);
  CHECK(enc2.size() == enc.size());
  CHECK(enc2[0] == 1.0);
  CHECK(enc2.back() == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("mutation_apply") {
  auto base = string_to_tokens("ACGT");
  SUBCASE("single substitution") {
    auto out = mutation_apply(base, {Mutation{1, string_to_tokens("T")[0]}});
    CHECK(tokens_to_string(out) == "ATGT");
  }
  SUBCASE("empty set is identity") {
    CHECK(mutation_apply(base, {}) == base);
  }
  SUBCASE("application order is irrelevant for distinct locations") {
    Mutation a{0, 5}, b{3, 7};
    CHECK(mutation_apply(base, {a, b}) == mutation_apply(base, {b, a}));
  }
  SUBCASE("duplicate location throws") {
    CHECK_THROWS_AS(mutation_apply(base, {Mutation{1, 2}, Mutation{1, 3}}),
                    std::invalid_argument);
  }
}

TEST_CASE("mutation env dynamics") {
  MutationConfig cfg;
  cfg.base = string_to_tokens("ACGT");
  cfg.max_mutations = 2;
  MutationEnv env(cfg);

  SUBCASE("stop requires at least one mutation") {
    auto actions = env.valid_actions(env.initial_state());
    CHECK(std::find(actions.begin(), actions.end(), env.stop_action()) == actions.end());
    CHECK(actions.size() == 4 * 20);
  }
  SUBCASE("states are order-independent sets") {
    EnvState s1 = env.apply(env.apply(env.initial_state(), 0 * 20 + 5), 2 * 20 + 7);
    EnvState s2 = env.apply(env.apply(env.initial_state(), 2 * 20 + 7), 0 * 20 + 5);
    CHECK(s1 == s2);
  }
  SUBCASE("mutated locations are masked out") {
    EnvState s = env.apply(env.initial_state(), 1 * 20 + 3);
    for (int a : env.valid_actions(s)) {
      if (a == env.stop_action()) continue;
      CHECK(a / 20 != 1);
    }
  }
  SUBCASE("only stop remains at the mutation budget") {
    EnvState s = env.apply(env.apply(env.initial_state(), 0), 1 * 20 + 4);
    CHECK(env.valid_actions(s) == std::vector<int>{env.stop_action()});
  }
  SUBCASE("a k-mutation state has k parents") {
    EnvState s = env.apply(env.apply(env.initial_state(), 0 * 20 + 5), 2 * 20 + 7);
    CHECK(env.parents(s).size() == 2);
    for (const auto& [parent, action] : env.parents(s)) {
      CHECK(env.apply(parent, action) == s);
    }
    EnvState t = env.apply(s, env.stop_action());
    CHECK(env.parents(t).size() == 1);
  }
  SUBCASE("payload is the mutated sequence") {
    EnvState s = env.apply(env.initial_state(), 1 * 20 + string_to_tokens("T")[0]);
    EnvState t = env.apply(s, env.stop_action());
    CHECK(env.payload_text(t) == "ATGT");
  }
}

TEST_CASE("mutation env parents match forward enumeration") {
  MutationConfig cfg;
  cfg.base = string_to_tokens("ACG");
  cfg.max_mutations = 2;
  MutationEnv env(cfg);
  DagOracle oracle(env);
  for (const auto& s : oracle.states) {
    auto claimed = env.parents(s);
    std::set<std::pair<EnvState, int>> claimed_set(claimed.begin(), claimed.end());
    auto it = oracle.incoming.find(s);
    if (it == oracle.incoming.end()) {
      CHECK(claimed.empty());
    } else {
      CHECK(claimed_set == it->second);
    }
  }
}

TEST_CASE("enumeration guard trips on large spaces") {
  NGramsEnv env(NGramsConfig{8, {"AC"}, kAminoCount});
  CHECK_THROWS_AS(enumerate_terminals(env, 100), std::runtime_error);
}
