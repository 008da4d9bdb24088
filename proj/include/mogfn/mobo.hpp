#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mogfn/env.hpp"
#include "mogfn/gflownet.hpp"
#include "mogfn/metrics.hpp"

namespace mogfn {

/// True objective function over sequences, treated as expensive; the loop
/// meters every call.
using SequenceOracle = std::function<ObjectiveVector(const std::vector<int>&)>;

/// Accumulating pool of (sequence, true objectives) pairs.
struct ALDataset {
  std::vector<std::vector<int>> sequences;
  std::vector<ObjectiveVector> objectives;
  int round = 0;

  int size() const { return static_cast<int>(sequences.size()); }
  bool contains(const std::vector<int>& seq) const;
  /// Throws on duplicate sequences; objectives must be in [0,1]^d.
  void add(std::vector<int> seq, ObjectiveVector obj);
};

/// Current non-dominated subset of the dataset, payloads included.
struct ParetoPool {
  std::vector<std::vector<int>> sequences;
  std::vector<ObjectiveVector> objectives;

  int size() const { return static_cast<int>(sequences.size()); }
};

ParetoPool extract_pareto_pool(const ALDataset& data);

/// Normalized k'-mer count features for k' = 1..k over the full 20-letter
/// alphabet (counts / (|x|-k'+1)), plus |x|/max_len.
std::vector<double> featurize(const std::vector<int>& seq, int k, int max_len);
int feature_dim(int k);

struct SurrogateConfig {
  std::vector<int> hidden = {32};
  int epochs = 40;
  int minibatch = 32;
  double lr = 0.003;
};

/// Bootstrap ensemble of MLP regressors on k-mer features; the members double
/// as posterior draws.
struct EnsembleSurrogate {
  std::vector<Mlp> members;
  std::vector<std::vector<int>> bootstrap_indices;  // resample per member
  int kmer = 2;
  int max_len = 0;
  int out_dim = 0;

  /// Member t's prediction, clamped to [0,1]^d.
  ObjectiveVector posterior_draw(int t, const std::vector<int>& seq) const;
  ObjectiveVector predict_mean(const std::vector<int>& seq) const;
};

EnsembleSurrogate fit_surrogate(const ALDataset& data, int ensemble_size, int kmer,
                                int max_len, const SurrogateConfig& cfg, Rng& rng);

/// Hypervolume improvement of y over the pool front.
double hvi(const ObjectiveVector& y, const Front& pool, const HvRef& ref);

/// Member-wise hypervolume improvement conditioned on the committed batch,
/// averaged over ensemble members. Caches per-member fronts so scoring stays
/// cheap inside the proposer's training loop.
class NehviScorer {
 public:
  NehviScorer(const EnsembleSurrogate& surrogate,
              const std::vector<std::vector<int>>& pool_sequences, HvRef ref);

  /// Mean member-wise HVI, pre-floor (>= 0).
  double score(const std::vector<int>& seq) const;
  /// Adds the candidate's member predictions to the conditioning fronts.
  void commit(const std::vector<int>& seq);

 private:
  const EnsembleSurrogate& surrogate_;
  HvRef ref_;
  std::vector<std::vector<ObjectiveVector>> member_points_;
  std::vector<double> base_hv_;
};

/// The spec-level acquisition value: scorer output floored at 1e-8.
double nehvi_score(const std::vector<int>& seq, const EnsembleSurrogate& surrogate,
                   const ParetoPool& pool,
                   const std::vector<std::vector<int>>& committed, const HvRef& ref);

struct ALConfig {
  int rounds = 16;
  int batch = 16;          // b candidates per round
  int ensemble_size = 5;   // M
  int kmer = 2;
  int max_mutations = 4;   // T
  double beta0 = 2.0;
  double beta_decrement = 0.1;  // per-round delta-beta; beta clamps at 1
  int proposer_steps = 120;
  int proposer_batch = 32;
  double proposer_lr = 0.01;
  double proposer_lr_z = 0.05;
  double proposer_delta = 0.05;
  std::vector<int> proposer_hidden = {64};
  int candidate_pool = 128;  // proposals drawn per round before greedy selection
  int init_size = 32;
  int seq_len = 24;
  int duplicate_retry_cap = 200;
  SurrogateConfig surrogate;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ProposerResult {
  ConditionalPolicyNet net;
  std::vector<double> losses;
  int skipped_steps = 0;
  bool failed = false;
};

/// Preference-free GFlowNet over mutation sets: each episode picks a base
/// uniformly from the pool and rewards a mutation set m with
/// nehvi(x'_m)^beta (floored).
ProposerResult train_mutation_proposer(const ParetoPool& pool, const NehviScorer& scorer,
                                       double beta, const ALConfig& cfg, Rng& rng);

enum class ProposerKind : std::uint8_t { GflowNet, RandomMutation };

struct ALRoundRecord {
  int round = 0;
  std::int64_t oracle_calls = 0;
  double relative_hv = 1.0;
  double beta = 0.0;
  int random_fills = 0;  // batch slots filled by random mutations after retries
};

struct ALResult {
  ALDataset dataset;
  Front front;  // accumulated non-dominated front with payload texts
  std::vector<ALRoundRecord> rounds;
  std::int64_t oracle_calls = 0;
};

using RoundCallback = std::function<void(const ALRoundRecord&, const Front&)>;

/// Algorithm: per round fit the surrogate, extract the Pareto pool, train the
/// proposer, greedily build a batch of b novel candidates under NEHVI with
/// growing conditioning, evaluate them with the true oracle, and anneal beta.
/// `initial` seeds the dataset; when null, init_size random sequences of
/// length seq_len are drawn and evaluated.
ALResult run_al_loop(const SequenceOracle& oracle, int obj_dim, const ALConfig& cfg,
                     ProposerKind proposer, const RoundCallback& on_round = nullptr,
                     const ALDataset* initial = nullptr);

}  // namespace mogfn
