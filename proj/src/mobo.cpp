#include "mogfn/mobo.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>

namespace mogfn {

bool ALDataset::contains(const std::vector<int>& seq) const {
  return std::find(sequences.begin(), sequences.end(), seq) != sequences.end();
}

void ALDataset::add(std::vector<int> seq, ObjectiveVector obj) {
  if (contains(seq)) {
    throw std::invalid_argument("ALDataset: duplicate sequence");
  }
  obj.validate();
  sequences.push_back(std::move(seq));
  objectives.push_back(std::move(obj));
}

ParetoPool extract_pareto_pool(const ALDataset& data) {
  std::vector<Candidate> cands;
  cands.reserve(data.sequences.size());
  for (int i = 0; i < data.size(); ++i) {
    Candidate c;
    c.payload = data.sequences[static_cast<std::size_t>(i)];
    c.objectives = data.objectives[static_cast<std::size_t>(i)];
    cands.push_back(std::move(c));
  }
  // Reuse the front filter's survivor logic but keep full payload tokens.
  ParetoPool pool;
  for (int i = 0; i < data.size(); ++i) {
    const auto& pi = data.objectives[static_cast<std::size_t>(i)];
    bool drop = false;
    for (int j = 0; j < data.size() && !drop; ++j) {
      if (j == i) continue;
      const auto& pj = data.objectives[static_cast<std::size_t>(j)];
      if (dominates(pj, pi)) drop = true;
      if (pj == pi && j < i) drop = true;  // dedup ties by input order
    }
    if (!drop) {
      pool.sequences.push_back(data.sequences[static_cast<std::size_t>(i)]);
      pool.objectives.push_back(pi);
    }
  }
  return pool;
}

int feature_dim(int k) {
  int dim = 1;  // length feature
  int block = 1;
  for (int k2 = 1; k2 <= k; ++k2) {
    block *= kAminoCount;
    dim += block;
  }
  return dim;
}

std::vector<double> featurize(const std::vector<int>& seq, int k, int max_len) {
  if (k < 1) throw std::invalid_argument("featurize: k must be >= 1");
  if (max_len < 1) throw std::invalid_argument("featurize: max_len must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(feature_dim(k)), 0.0);
  int offset = 0;
  int block = 1;
  for (int k2 = 1; k2 <= k; ++k2) {
    block *= kAminoCount;
    int windows = static_cast<int>(seq.size()) - k2 + 1;
    if (windows > 0) {
      for (int start = 0; start < windows; ++start) {
        int index = 0;
        for (int j = 0; j < k2; ++j) {
          index = index * kAminoCount + seq[static_cast<std::size_t>(start + j)];
        }
        out[static_cast<std::size_t>(offset + index)] += 1.0 / windows;
      }
    }
    offset += block;
  }
  out.back() = static_cast<double>(seq.size()) / max_len;
  return out;
}

EnsembleSurrogate fit_surrogate(const ALDataset& data, int ensemble_size, int kmer,
                                int max_len, const SurrogateConfig& cfg, Rng& rng) {
  if (data.size() < 2) {
    throw std::invalid_argument("fit_surrogate: need at least 2 data points");
  }
  if (ensemble_size < 1) {
    throw std::invalid_argument("fit_surrogate: ensemble_size must be >= 1");
  }
  const int n = data.size();
  const int d = data.objectives.front().dim();
  EnsembleSurrogate ens;
  ens.kmer = kmer;
  ens.max_len = max_len;
  ens.out_dim = d;

  std::vector<std::vector<double>> features;
  features.reserve(static_cast<std::size_t>(n));
  for (const auto& seq : data.sequences) {
    features.push_back(featurize(seq, kmer, max_len));
  }

  std::vector<int> sizes{feature_dim(kmer)};
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(d);

  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int m = 0; m < ensemble_size; ++m) {
    std::vector<int> resample(static_cast<std::size_t>(n));
    for (auto& idx : resample) idx = pick(rng);
    Mlp net = Mlp::create(sizes, rng);
    AdamState adam = AdamState::like(net, cfg.lr);
    MlpGrads grads = MlpGrads::like(net);
    std::vector<int> order(resample.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> upstream(static_cast<std::size_t>(d));
    ForwardCache cache;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t start = 0; start < order.size();
           start += static_cast<std::size_t>(cfg.minibatch)) {
        std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.minibatch));
        grads.zero();
        double inv = 1.0 / static_cast<double>(end - start);
        for (std::size_t i = start; i < end; ++i) {
          int row = resample[static_cast<std::size_t>(order[i])];
          net.forward_cached(features[static_cast<std::size_t>(row)], cache);
          const auto& y = data.objectives[static_cast<std::size_t>(row)];
          for (int j = 0; j < d; ++j) {
            upstream[static_cast<std::size_t>(j)] =
                2.0 * (cache.output()[static_cast<std::size_t>(j)] - y[j]) * inv;
          }
          net.backward_cached(cache, upstream, grads, false);
        }
        adam_step(net, grads, adam);
      }
    }
    ens.members.push_back(std::move(net));
    ens.bootstrap_indices.push_back(std::move(resample));
  }
  return ens;
}

ObjectiveVector EnsembleSurrogate::posterior_draw(int t, const std::vector<int>& seq) const {
  if (t < 0 || t >= static_cast<int>(members.size())) {
    throw std::invalid_argument("posterior_draw: member index out of range");
  }
  auto raw = members[static_cast<std::size_t>(t)].forward(featurize(seq, kmer, max_len));
  ObjectiveVector out;
  out.values.reserve(raw.size());
  for (double v : raw) out.values.push_back(std::clamp(v, 0.0, 1.0));
  return out;
}

ObjectiveVector EnsembleSurrogate::predict_mean(const std::vector<int>& seq) const {
  ObjectiveVector mean{std::vector<double>(static_cast<std::size_t>(out_dim), 0.0)};
  for (int t = 0; t < static_cast<int>(members.size()); ++t) {
    auto draw = posterior_draw(t, seq);
    for (int j = 0; j < out_dim; ++j) mean[j] += draw[j] / static_cast<double>(members.size());
  }
  return mean;
}

double hvi(const ObjectiveVector& y, const Front& pool, const HvRef& ref) {
  Front with = pool;
  with.payloads.clear();
  with.points.push_back(y);
  return hypervolume(with, ref) - hypervolume(pool, ref);
}

NehviScorer::NehviScorer(const EnsembleSurrogate& surrogate,
                         const std::vector<std::vector<int>>& pool_sequences, HvRef ref)
    : surrogate_(surrogate), ref_(std::move(ref)) {
  const int m = static_cast<int>(surrogate_.members.size());
  member_points_.resize(static_cast<std::size_t>(m));
  base_hv_.resize(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) {
    for (const auto& seq : pool_sequences) {
      member_points_[static_cast<std::size_t>(t)].push_back(surrogate_.posterior_draw(t, seq));
    }
    Front f;
    f.points = member_points_[static_cast<std::size_t>(t)];
    base_hv_[static_cast<std::size_t>(t)] = hypervolume(f, ref_);
  }
}

double NehviScorer::score(const std::vector<int>& seq) const {
  double total = 0.0;
  for (std::size_t t = 0; t < member_points_.size(); ++t) {
    Front f;
    f.points = member_points_[t];
    f.points.push_back(surrogate_.posterior_draw(static_cast<int>(t), seq));
    total += hypervolume(f, ref_) - base_hv_[t];
  }
  return total / static_cast<double>(member_points_.size());
}

void NehviScorer::commit(const std::vector<int>& seq) {
  for (std::size_t t = 0; t < member_points_.size(); ++t) {
    member_points_[t].push_back(surrogate_.posterior_draw(static_cast<int>(t), seq));
    Front f;
    f.points = member_points_[t];
    base_hv_[t] = hypervolume(f, ref_);
  }
}

double nehvi_score(const std::vector<int>& seq, const EnsembleSurrogate& surrogate,
                   const ParetoPool& pool,
                   const std::vector<std::vector<int>>& committed, const HvRef& ref) {
  NehviScorer scorer(surrogate, pool.sequences, ref);
  for (const auto& c : committed) scorer.commit(c);
  return std::max(scorer.score(seq), 1e-8);
}

void ALConfig::validate() const {
  if (rounds < 1) throw std::invalid_argument("ALConfig: rounds must be >= 1");
  if (batch < 1) throw std::invalid_argument("ALConfig: batch must be >= 1");
  if (ensemble_size < 2) throw std::invalid_argument("ALConfig: ensemble_size must be >= 2");
  if (kmer < 1) throw std::invalid_argument("ALConfig: kmer must be >= 1");
  if (max_mutations < 1) throw std::invalid_argument("ALConfig: max_mutations must be >= 1");
  if (!(beta0 >= 1.0)) throw std::invalid_argument("ALConfig: beta0 must be >= 1");
  if (beta_decrement < 0.0) {
    throw std::invalid_argument("ALConfig: beta_decrement must be >= 0");
  }
  if (proposer_steps < 1 || proposer_batch < 1) {
    throw std::invalid_argument("ALConfig: proposer budget must be positive");
  }
  if (candidate_pool < batch) {
    throw std::invalid_argument("ALConfig: candidate_pool must cover the batch");
  }
  if (init_size < 2) throw std::invalid_argument("ALConfig: init_size must be >= 2");
  if (seq_len < 1) throw std::invalid_argument("ALConfig: seq_len must be >= 1");
  if (max_mutations > seq_len) {
    throw std::invalid_argument("ALConfig: max_mutations cannot exceed seq_len");
  }
}

namespace {

int pool_pad_len(const ParetoPool& pool) {
  std::size_t pad = 0;
  for (const auto& seq : pool.sequences) pad = std::max(pad, seq.size());
  return static_cast<int>(pad);
}

std::vector<MutationEnv> make_envs(const ParetoPool& pool, const ALConfig& cfg) {
  int pad = pool_pad_len(pool);
  std::vector<MutationEnv> envs;
  envs.reserve(pool.sequences.size());
  for (const auto& seq : pool.sequences) {
    MutationConfig mc;
    mc.base = seq;
    mc.max_mutations = std::min(cfg.max_mutations, static_cast<int>(seq.size()));
    mc.pad_len = pad;
    envs.emplace_back(std::move(mc));
  }
  return envs;
}

}  // namespace

ProposerResult train_mutation_proposer(const ParetoPool& pool, const NehviScorer& scorer,
                                       double beta, const ALConfig& cfg, Rng& rng) {
  if (pool.size() == 0) {
    throw std::invalid_argument("train_mutation_proposer: empty pool");
  }
  auto envs = make_envs(pool, cfg);
  ProposerResult result;
  ThermometerConfig raw{0, 0.0, 1.0};
  result.net = ConditionalPolicyNet::create(envs.front(), 0, raw, cfg.proposer_hidden, rng);
  PolicyAdam adam = PolicyAdam::like(result.net, cfg.proposer_lr, cfg.proposer_lr_z);
  PolicyGrads grads = PolicyGrads::like(result.net);
  Preference none;  // unconditional
  std::uniform_int_distribution<int> pick(0, pool.size() - 1);

  for (int step = 0; step < cfg.proposer_steps; ++step) {
    grads.zero();
    double loss_sum = 0.0;
    double inv_batch = 1.0 / cfg.proposer_batch;
    for (int b = 0; b < cfg.proposer_batch; ++b) {
      const MutationEnv& env = envs[static_cast<std::size_t>(pick(rng))];
      Trajectory traj = sample_trajectory(result.net, env, none, cfg.proposer_delta, rng);
      double acq = std::max(scorer.score(env.mutated_sequence(traj.terminal())), 1e-8);
      double reward = std::max(std::pow(acq, beta), 1e-8);
      loss_sum += tb_loss(result.net, env, traj, reward, &grads, inv_batch);
    }
    double loss = loss_sum * inv_batch;
    result.losses.push_back(loss);
    if (!std::isfinite(loss) || !adam_step(result.net, grads, adam)) {
      ++result.skipped_steps;
    }
  }
  result.failed = result.skipped_steps > cfg.proposer_steps / 100;
  return result;
}

namespace {

std::vector<int> random_sequence(int len, Rng& rng) {
  std::uniform_int_distribution<int> letter(0, kAminoCount - 1);
  std::vector<int> seq(static_cast<std::size_t>(len));
  for (auto& t : seq) t = letter(rng);
  return seq;
}

// Uniform-action rollout on a mutation env; the random-proposer baseline and
// the duplicate-fill path both use it.
std::vector<int> random_mutant(const std::vector<MutationEnv>& envs, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(envs.size()) - 1);
  const MutationEnv& env = envs[static_cast<std::size_t>(pick(rng))];
  EnvState s = env.initial_state();
  while (!env.is_terminal(s)) {
    auto valid = env.valid_actions(s);
    std::uniform_int_distribution<int> choice(0, static_cast<int>(valid.size()) - 1);
    s = env.apply(s, valid[static_cast<std::size_t>(choice(rng))]);
  }
  return env.mutated_sequence(s);
}

}  // namespace

ALResult run_al_loop(const SequenceOracle& oracle, int obj_dim, const ALConfig& cfg,
                     ProposerKind proposer, const RoundCallback& on_round,
                     const ALDataset* initial) {
  cfg.validate();
  if (obj_dim < 1) throw std::invalid_argument("run_al_loop: obj_dim must be >= 1");
  Rng rng(cfg.seed);
  ALResult result;
  auto metered_oracle = [&](const std::vector<int>& seq) {
    ++result.oracle_calls;
    return oracle(seq);
  };

  if (initial != nullptr) {
    result.dataset = *initial;
  } else {
    while (result.dataset.size() < cfg.init_size) {
      auto seq = random_sequence(cfg.seq_len, rng);
      if (result.dataset.contains(seq)) continue;
      result.dataset.add(seq, metered_oracle(seq));
    }
  }

  // Accumulate the front incrementally: previous survivors keep their order,
  // so an unchanged front reproduces the identical hypervolume.
  std::vector<Candidate> accumulated;
  for (int i = 0; i < result.dataset.size(); ++i) {
    Candidate c;
    c.payload = result.dataset.sequences[static_cast<std::size_t>(i)];
    c.text = tokens_to_string(c.payload);
    c.objectives = result.dataset.objectives[static_cast<std::size_t>(i)];
    accumulated.push_back(std::move(c));
  }
  Front front = nondominated_front(accumulated);
  HvRef ref = HvRef::origin(obj_dim);
  const double hv0 = hypervolume(front, ref);
  if (hv0 <= 0.0) {
    throw std::runtime_error("run_al_loop: initial front has zero hypervolume");
  }

  ALRoundRecord init_record;
  init_record.round = 0;
  init_record.oracle_calls = result.oracle_calls;
  init_record.relative_hv = 1.0;
  init_record.beta = cfg.beta0;
  result.rounds.push_back(init_record);
  if (on_round) on_round(init_record, front);

  double beta = cfg.beta0;
  for (int round = 1; round <= cfg.rounds; ++round) {
    ParetoPool pool = extract_pareto_pool(result.dataset);
    auto envs = make_envs(pool, cfg);

    std::vector<std::vector<int>> proposals;
    std::set<std::vector<int>> seen;
    EnsembleSurrogate surrogate;
    std::unique_ptr<NehviScorer> scorer;
    if (proposer == ProposerKind::GflowNet) {
      surrogate = fit_surrogate(result.dataset, cfg.ensemble_size, cfg.kmer,
                                cfg.seq_len, cfg.surrogate, rng);
      scorer = std::make_unique<NehviScorer>(surrogate, pool.sequences, ref);
      ProposerResult trained = train_mutation_proposer(pool, *scorer, beta, cfg, rng);
      Preference none;
      std::uniform_int_distribution<int> pick(0, pool.size() - 1);
      while (static_cast<int>(proposals.size()) < cfg.candidate_pool) {
        const MutationEnv& env = envs[static_cast<std::size_t>(pick(rng))];
        Trajectory traj = sample_trajectory(trained.net, env, none, 0.0, rng);
        auto seq = env.mutated_sequence(traj.terminal());
        if (result.dataset.contains(seq) || seen.count(seq)) continue;
        seen.insert(seq);
        proposals.push_back(std::move(seq));
        if (static_cast<int>(seen.size()) >= cfg.candidate_pool * 4) break;  // degenerate policy guard
      }
    } else {
      while (static_cast<int>(proposals.size()) < cfg.candidate_pool) {
        auto seq = random_mutant(envs, rng);
        if (result.dataset.contains(seq) || seen.count(seq)) continue;
        seen.insert(seq);
        proposals.push_back(std::move(seq));
      }
    }

    // Greedy batch construction; NEHVI conditioning grows with each commit.
    std::vector<std::vector<int>> batch;
    int random_fills = 0;
    std::vector<bool> used(proposals.size(), false);
    while (static_cast<int>(batch.size()) < cfg.batch) {
      int best = -1;
      double best_score = -1.0;
      for (std::size_t i = 0; i < proposals.size(); ++i) {
        if (used[i]) continue;
        double s = scorer ? scorer->score(proposals[i]) : 0.0;
        if (s > best_score) {
          best_score = s;
          best = static_cast<int>(i);
        }
      }
      std::vector<int> chosen;
      if (best >= 0) {
        used[static_cast<std::size_t>(best)] = true;
        chosen = proposals[static_cast<std::size_t>(best)];
      } else {
        // Proposal pool exhausted; fall back to random mutations.
        int attempts = 0;
        do {
          chosen = random_mutant(envs, rng);
          ++attempts;
        } while ((result.dataset.contains(chosen) || seen.count(chosen)) &&
                 attempts < cfg.duplicate_retry_cap);
        if (result.dataset.contains(chosen) || seen.count(chosen)) {
          throw std::runtime_error("run_al_loop: could not find a novel candidate");
        }
        seen.insert(chosen);
        ++random_fills;
      }
      if (scorer) scorer->commit(chosen);
      batch.push_back(std::move(chosen));
    }

    for (auto& seq : batch) {
      ObjectiveVector y = metered_oracle(seq);
      Candidate c;
      c.payload = seq;
      c.text = tokens_to_string(seq);
      c.objectives = y;
      accumulated = [&] {
        std::vector<Candidate> next;
        for (std::size_t i = 0; i < front.points.size(); ++i) {
          Candidate keep;
          keep.text = front.payloads[i];
          keep.payload = string_to_tokens(front.payloads[i]);
          keep.objectives = front.points[i];
          next.push_back(std::move(keep));
        }
        next.push_back(c);
        return next;
      }();
      front = nondominated_front(accumulated);
      result.dataset.add(std::move(seq), std::move(y));
    }
    result.dataset.round = round;

    beta = std::max(1.0, beta - cfg.beta_decrement);
    ALRoundRecord record;
    record.round = round;
    record.oracle_calls = result.oracle_calls;
    record.relative_hv = hypervolume(front, ref) / hv0;
    record.beta = beta;
    record.random_fills = random_fills;
    result.rounds.push_back(record);
    if (on_round) on_round(record, front);
  }
  result.front = front;
  return result;
}

}  // namespace mogfn
