#include "mogfn/reinforce.hpp"

#include <cmath>
#include <stdexcept>

namespace mogfn {

void ReinforceConfig::validate() const {
  if (!(lr >= 0.0)) throw std::invalid_argument("ReinforceConfig: lr must be >= 0");
  if (steps < 1) throw std::invalid_argument("ReinforceConfig: steps must be >= 1");
  if (batch_size < 1) {
    throw std::invalid_argument("ReinforceConfig: batch_size must be >= 1");
  }
  if (baseline_decay < 0.0 || baseline_decay >= 1.0) {
    throw std::invalid_argument("ReinforceConfig: baseline_decay must be in [0,1)");
  }
  if (entropy_weight < 0.0) {
    throw std::invalid_argument("ReinforceConfig: entropy_weight must be >= 0");
  }
  if (!(dirichlet_alpha > 0.0)) {
    throw std::invalid_argument("ReinforceConfig: dirichlet_alpha must be > 0");
  }
  if (pref_bins < 0) throw std::invalid_argument("ReinforceConfig: pref_bins must be >= 0");
}

double reinforce_loss(const ConditionalPolicyNet& net, const Env& env,
                      const std::vector<Trajectory>& batch,
                      const std::vector<double>& returns, double baseline,
                      double entropy_weight, PolicyGrads* grads) {
  if (batch.size() != returns.size() || batch.empty()) {
    throw std::invalid_argument("reinforce_loss: batch and returns must be parallel");
  }
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  std::vector<double> state_buf, input, logit_up;
  ForwardCache cache;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Trajectory& traj = batch[b];
    const double advantage = returns[b] - baseline;
    auto cond = net.encode_cond(traj.preference);
    for (std::size_t t = 0; t < traj.actions.size(); ++t) {
      const EnvState& s = traj.states[t];
      env.state_encoding(s, state_buf);
      input.resize(state_buf.size() + cond.size());
      std::copy(state_buf.begin(), state_buf.end(), input.begin());
      std::copy(cond.begin(), cond.end(),
                input.begin() + static_cast<std::ptrdiff_t>(state_buf.size()));
      net.policy.forward_cached(input, cache);
      auto mask = env.action_mask(s);
      auto probs = masked_softmax(cache.output(), mask);
      int action = traj.actions[t];
      double log_p = std::log(probs[static_cast<std::size_t>(action)]);
      loss -= inv_batch * advantage * log_p;

      double entropy = 0.0;
      if (entropy_weight > 0.0) {
        for (double p : probs) {
          if (p > 0.0) entropy -= p * std::log(p);
        }
        loss -= inv_batch * entropy_weight * entropy;
      }

      if (grads != nullptr) {
        logit_up.assign(probs.size(), 0.0);
        for (std::size_t a = 0; a < probs.size(); ++a) {
          double indicator = static_cast<int>(a) == action ? 1.0 : 0.0;
          // d/dlogit of -(G-b) log p_a
          logit_up[a] = -inv_batch * advantage * (indicator - probs[a]);
          // d/dlogit of -w_e * H(p) = w_e * p_a (log p_a + H)
          if (entropy_weight > 0.0 && probs[a] > 0.0) {
            logit_up[a] += inv_batch * entropy_weight * probs[a] *
                           (std::log(probs[a]) + entropy);
          }
        }
        net.policy.backward_cached(cache, logit_up, grads->policy, false);
      }
    }
  }
  return loss;
}

TrainResult train_moreinforce(const Env& env, const ReinforceConfig& cfg,
                              const StepCallback& callback) {
  cfg.validate();
  Rng rng(cfg.seed);
  ThermometerConfig enc{cfg.pref_bins, 0.0, 1.0};
  TrainResult result;
  result.net = ConditionalPolicyNet::create(env, env.num_objectives(), enc, cfg.hidden, rng);
  PolicyAdam adam = PolicyAdam::like(result.net, cfg.lr, cfg.lr);
  PolicyGrads grads = PolicyGrads::like(result.net);
  DirichletParam dir{cfg.dirichlet_alpha, env.num_objectives()};

  double baseline = 0.0;
  std::vector<Trajectory> batch;
  std::vector<double> returns;
  for (int step = 0; step < cfg.steps; ++step) {
    Preference w = sample_preference(dir, rng);
    batch.clear();
    returns.clear();
    for (int b = 0; b < cfg.batch_size; ++b) {
      batch.push_back(sample_trajectory(result.net, env, w, 0.0, rng));
      returns.push_back(scalarize(cfg.scalarization, env.objectives(batch.back().terminal()), w));
    }
    grads.zero();
    double loss = reinforce_loss(result.net, env, batch, returns, baseline,
                                 cfg.entropy_weight, &grads);
    result.losses.push_back(loss);
    if (!std::isfinite(loss) || !adam_step(result.net, grads, adam)) {
      ++result.skipped_steps;
    }
    double mean_return = 0.0;
    for (double g : returns) mean_return += g;
    mean_return /= static_cast<double>(returns.size());
    baseline = cfg.baseline_decay * baseline + (1.0 - cfg.baseline_decay) * mean_return;
    if (callback) callback(step, loss, result.net);
  }
  result.failed = result.skipped_steps > cfg.steps / 100;
  return result;
}

}  // namespace mogfn
