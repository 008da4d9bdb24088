#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "mogfn/env.hpp"
#include "mogfn/neural.hpp"
#include "mogfn/scalarize.hpp"

namespace mogfn {

/// Preference-conditional policy: a forward-policy MLP over
/// state_encoding (+) encoded preference emitting one logit per action, and a
/// logZ MLP over the encoded preference. The backward policy is analytic
/// (uniform over parents; constant 1 on trees), never learned.
struct ConditionalPolicyNet {
  Mlp policy;
  Mlp log_z;
  ThermometerConfig pref_encoding;  // bins = 0 feeds raw weights
  int state_dim = 0;
  int cond_dim = 0;  // encoded preference length; 0 = unconditional

  /// pref_dim is the objective count, or 0 for an unconditional net (the
  /// logZ head then sees a constant scalar input).
  static ConditionalPolicyNet create(const Env& env, int pref_dim,
                                     const ThermometerConfig& enc,
                                     const std::vector<int>& hidden, Rng& rng);

  std::vector<double> encode_cond(const Preference& w) const;
  double log_z_value(const std::vector<double>& cond) const;
  std::vector<double> log_z_input(const std::vector<double>& cond) const;
};

struct PolicyGrads {
  MlpGrads policy;
  MlpGrads log_z;

  static PolicyGrads like(const ConditionalPolicyNet& net);
  void zero();
  void scale(double s);
  bool finite() const;
};

struct PolicyAdam {
  AdamState policy;
  AdamState log_z;

  static PolicyAdam like(const ConditionalPolicyNet& net, double lr_pf, double lr_z);
};

bool adam_step(ConditionalPolicyNet& net, const PolicyGrads& grads, PolicyAdam& state);

/// One sampled construction path, ending in a terminal state.
struct Trajectory {
  std::vector<EnvState> states;  // states.front() = s0, states.back() terminal
  std::vector<int> actions;      // actions[i]: states[i] -> states[i+1]
  Preference preference;
  double log_pf = 0.0;  // sum of log P_F under the unmixed policy at sampling time
  double log_pb = 0.0;  // sum of log P_B (uniform over parents)

  const EnvState& terminal() const { return states.back(); }
};

/// Sum of log P_B over the trajectory's transitions with P_B uniform over
/// parents. Zero on tree-structured environments.
double log_pb_uniform_parents(const Env& env, const Trajectory& traj);

/// Rolls out one trajectory, drawing each action from
/// (1-delta) * policy + delta * uniform over the valid actions.
Trajectory sample_trajectory(const ConditionalPolicyNet& net, const Env& env,
                             const Preference& w, double delta, Rng& rng);

/// Squared trajectory-balance residual
///   (log Z(w) + sum log P_F - log reward - sum log P_B)^2
/// for one trajectory. Requires reward > 0 (callers floor it). When `grads`
/// is non-null, exact gradients for the policy and logZ nets are accumulated
/// into it, scaled by `grad_scale`.
double tb_loss(const ConditionalPolicyNet& net, const Env& env, const Trajectory& traj,
               double reward, PolicyGrads* grads = nullptr, double grad_scale = 1.0);

/// Scalarized terminal reward as used for training: scalarize, raise to
/// beta, floor.
double scalarized_reward(const Scalarization& s, double beta, double floor,
                         const ObjectiveVector& objectives, const Preference& w);

struct TrainConfig {
  double beta = 1.0;   // reward exponent
  double delta = 0.05; // uniform mix during sampling
  int steps = 1000;
  int batch_size = 128;
  double lr_pf = 0.01;
  double lr_z = 0.01;
  double dirichlet_alpha = 1.5;
  Scalarization scalarization;
  std::vector<int> hidden = {64, 64};
  int pref_bins = 0;  // thermometer bins for the preference; 0 = raw
  double reward_floor = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainResult {
  ConditionalPolicyNet net;
  std::vector<double> losses;  // one entry per step (NaN-skipped steps keep their value)
  int skipped_steps = 0;
  bool failed = false;  // more than 1% of steps skipped
};

using StepCallback =
    std::function<void(int step, double loss, const ConditionalPolicyNet& net)>;

/// Preference-conditional trajectory-balance training: per step draw
/// w ~ Dirichlet(alpha), roll a minibatch under the delta-mixed policy,
/// reward = scalarize(...)^beta floored, Adam on the mean TB loss.
TrainResult train_mogfn_pc(const Env& env, const TrainConfig& cfg,
                           const StepCallback& callback = nullptr);

/// Terminal distribution of an arbitrary action-probability function,
/// computed by dynamic programming over the full DAG in topological order.
/// Throws when more than `max_states` states are reachable.
std::map<EnvState, double> exact_distribution(
    const Env& env,
    const std::function<std::vector<double>(const EnvState&)>& action_probs,
    std::size_t max_states = 1000000);

/// Same DP for the delta=0 policy of `net` conditioned on `w`.
std::map<EnvState, double> exact_policy_distribution(const ConditionalPolicyNet& net,
                                                     const Env& env, const Preference& w,
                                                     std::size_t max_states = 1000000);

/// Mean over terminals x of |pi(x|w) - R(x|w)^beta / Z_beta(w)|, the exact
/// check of the learned distribution against its target.
double l1_distribution_gap(const ConditionalPolicyNet& net, const Env& env,
                           const Preference& w, const Scalarization& s, double beta,
                           double reward_floor = 1e-8,
                           std::size_t max_states = 1000000);

/// N i.i.d. rollouts at delta = 0, with objectives evaluated per candidate.
std::vector<Candidate> sample_candidates(const ConditionalPolicyNet& net, const Env& env,
                                         const Preference& w, int n, Rng& rng);

}  // namespace mogfn
