#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mogfn/core.hpp"

namespace mogfn {

/// 20 amino-acid letters used by the sequence environments; the
/// end-of-sequence token is the extra action id 20.
inline constexpr std::string_view kAminoAlphabet = "ARNDCEQGHILKMFPSTWYV";
inline constexpr int kAminoCount = 20;
inline constexpr int kEosToken = 20;

std::string tokens_to_string(const std::vector<int>& tokens);
std::vector<int> string_to_tokens(std::string_view text);

/// Environment state: an env-specific token payload plus a terminal flag.
/// Ordered so states can key deterministic maps.
struct EnvState {
  std::vector<int> tokens;
  bool terminal = false;

  bool operator==(const EnvState&) const = default;
  auto operator<=>(const EnvState&) const = default;
};

/// Finite DAG of states rooted at initial_state(), preference-independent
/// dynamics, multi-objective rewards on terminal states. Instances are
/// immutable after construction; stepping works on caller-owned states.
class Env {
 public:
  virtual ~Env() = default;

  virtual int action_count() const = 0;
  virtual int num_objectives() const = 0;
  virtual int encoding_size() const = 0;
  virtual EnvState initial_state() const = 0;
  virtual std::vector<int> valid_actions(const EnvState& s) const = 0;
  virtual EnvState apply(const EnvState& s, int action) const = 0;
  /// All (parent, action) pairs with apply(parent, action) == s.
  virtual std::vector<std::pair<EnvState, int>> parents(const EnvState& s) const = 0;
  virtual ObjectiveVector objectives(const EnvState& terminal) const = 0;
  virtual void state_encoding(const EnvState& s, std::vector<double>& out) const = 0;
  virtual std::string payload_text(const EnvState& terminal) const = 0;
  /// Raw payload tokens of a terminal candidate (sequence letters or cell
  /// coordinates), as used by the diversity metrics.
  virtual std::vector<int> payload(const EnvState& terminal) const { return terminal.tokens; }
  /// True when every state has exactly one parent, so the backward policy
  /// is the constant 1.
  virtual bool tree_structured() const { return false; }

  bool is_terminal(const EnvState& s) const { return s.terminal; }
  std::vector<std::uint8_t> action_mask(const EnvState& s) const;
  Candidate make_candidate(const EnvState& terminal) const;
};

/// Exhaustively enumerates all terminal states reachable from the root.
/// Throws std::runtime_error if more than `max_states` states are visited.
std::vector<EnvState> enumerate_terminals(const Env& env, std::size_t max_states = 1000000);

// ---------------------------------------------------------------------------
// HyperGrid
// ---------------------------------------------------------------------------

enum class GridObjective : std::uint8_t { Brannin, Currin, Sphere, Shubert, Beale };

GridObjective grid_objective_from_name(std::string_view name);
std::string_view grid_objective_name(GridObjective f);

struct HyperGridConfig {
  int side = 8;  // H cells per dimension, 2-D grid
  std::vector<GridObjective> objectives = {GridObjective::Brannin, GridObjective::Currin};
};

/// 2-D grid. The walker starts at (0,0) and can increment either coordinate
/// (while < H-1) or stop, which makes the current cell terminal. Rewards are
/// the selected test functions evaluated on the affinely mapped unit square,
/// negated (all five are minimization forms) and min-max normalized to [0,1]
/// over the grid.
class HyperGridEnv : public Env {
 public:
  static constexpr int kActionIncrement0 = 0;
  static constexpr int kActionIncrement1 = 1;
  static constexpr int kActionStop = 2;

  explicit HyperGridEnv(HyperGridConfig cfg);

  int action_count() const override { return 3; }
  int num_objectives() const override { return static_cast<int>(cfg_.objectives.size()); }
  int encoding_size() const override { return 2 * cfg_.side; }
  EnvState initial_state() const override { return EnvState{{0, 0}, false}; }
  std::vector<int> valid_actions(const EnvState& s) const override;
  EnvState apply(const EnvState& s, int action) const override;
  std::vector<std::pair<EnvState, int>> parents(const EnvState& s) const override;
  ObjectiveVector objectives(const EnvState& terminal) const override;
  void state_encoding(const EnvState& s, std::vector<double>& out) const override;
  std::string payload_text(const EnvState& terminal) const override;

  int side() const { return cfg_.side; }
  const ObjectiveVector& cell_objectives(int i, int j) const;
  /// Enumerated true Pareto front over all H*H cells.
  Front true_front() const;

 private:
  HyperGridConfig cfg_;
  std::vector<ObjectiveVector> table_;  // H*H rows, row-major by (i, j)
};

/// Raw (unnormalized) value of one test function on its canonical domain,
/// with the unit square mapped affinely onto it. Exposed for the
/// normalization oracle in tests.
double grid_objective_raw(GridObjective f, double u0, double u1);

// ---------------------------------------------------------------------------
// N-grams sequences
// ---------------------------------------------------------------------------

struct NGramsConfig {
  int max_len = 36;
  std::vector<std::string> patterns = {"AC", "CV", "VA"};
  // Letters actually offered as actions (a prefix of kAminoAlphabet). The
  // full 20-letter vocabulary is the task default; tiny alphabets keep the
  // exhaustive-enumeration oracles tractable.
  int alphabet_size = kAminoCount;
};

/// Builds strings left to right over the 20-letter alphabet. Action 20 is
/// end-of-sequence (valid once the string is non-empty); reaching max_len
/// terminates directly. Objective i is the overlapping occurrence count of
/// pattern i divided by max_len - |pattern_i| + 1.
class NGramsEnv : public Env {
 public:
  explicit NGramsEnv(NGramsConfig cfg);

  int action_count() const override { return kAminoCount + 1; }
  int num_objectives() const override { return static_cast<int>(cfg_.patterns.size()); }
  int encoding_size() const override { return cfg_.max_len * (kAminoCount + 1) + 1; }
  EnvState initial_state() const override { return EnvState{{}, false}; }
  std::vector<int> valid_actions(const EnvState& s) const override;
  EnvState apply(const EnvState& s, int action) const override;
  std::vector<std::pair<EnvState, int>> parents(const EnvState& s) const override;
  ObjectiveVector objectives(const EnvState& terminal) const override;
  void state_encoding(const EnvState& s, std::vector<double>& out) const override;
  std::string payload_text(const EnvState& terminal) const override;
  bool tree_structured() const override { return true; }

  int max_len() const { return cfg_.max_len; }
  const std::vector<std::string>& patterns() const { return cfg_.patterns; }

 private:
  NGramsConfig cfg_;
  std::vector<std::vector<int>> pattern_tokens_;
};

/// Component i = number of (possibly overlapping) occurrences of pattern i.
std::vector<int> ngram_counts(std::string_view x, const std::vector<std::string>& patterns);

// ---------------------------------------------------------------------------
// Mutation sets over a base sequence
// ---------------------------------------------------------------------------

/// A single substitution: base[location] is replaced by `value`.
struct Mutation {
  int location = 0;
  int value = 0;

  bool operator==(const Mutation&) const = default;
  auto operator<=>(const Mutation&) const = default;
};

/// Applies substitutions at pairwise-distinct locations; length preserved.
/// Throws std::invalid_argument on duplicate or out-of-range locations.
std::vector<int> mutation_apply(const std::vector<int>& base, const std::vector<Mutation>& m);

struct MutationConfig {
  std::vector<int> base;  // letter ids
  int max_mutations = 4;
  int pad_len = 0;  // encoding/action padding; 0 = |base|
};

/// States are sets of applied mutations (stored sorted by location, so any
/// application order reaches the same state; the set with k mutations has k
/// parents). Stop is valid once at least one mutation is applied; at
/// max_mutations only stop remains. The terminal candidate is the mutated
/// sequence. Objectives delegate to an optional oracle callback.
class MutationEnv : public Env {
 public:
  MutationEnv(MutationConfig cfg,
              std::function<ObjectiveVector(const std::vector<int>&)> oracle = nullptr,
              int oracle_dim = 0);

  int action_count() const override { return pad_len_ * kAminoCount + 1; }
  int num_objectives() const override { return oracle_dim_; }
  int encoding_size() const override { return pad_len_ * (kAminoCount + 1) + pad_len_; }
  EnvState initial_state() const override { return EnvState{{}, false}; }
  std::vector<int> valid_actions(const EnvState& s) const override;
  EnvState apply(const EnvState& s, int action) const override;
  std::vector<std::pair<EnvState, int>> parents(const EnvState& s) const override;
  ObjectiveVector objectives(const EnvState& terminal) const override;
  void state_encoding(const EnvState& s, std::vector<double>& out) const override;
  std::string payload_text(const EnvState& terminal) const override;
  std::vector<int> payload(const EnvState& terminal) const override;

  int stop_action() const { return pad_len_ * kAminoCount; }
  std::vector<Mutation> mutations_of(const EnvState& s) const;
  std::vector<int> mutated_sequence(const EnvState& s) const;
  const std::vector<int>& base() const { return cfg_.base; }

 private:
  MutationConfig cfg_;
  int pad_len_;
  std::function<ObjectiveVector(const std::vector<int>&)> oracle_;
  int oracle_dim_;
};

}  // namespace mogfn
