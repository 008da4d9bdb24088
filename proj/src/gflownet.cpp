#include "mogfn/gflownet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace mogfn {

ConditionalPolicyNet ConditionalPolicyNet::create(const Env& env, int pref_dim,
                                                  const ThermometerConfig& enc,
                                                  const std::vector<int>& hidden,
                                                  Rng& rng) {
  ConditionalPolicyNet net;
  net.pref_encoding = enc;
  net.state_dim = env.encoding_size();
  net.cond_dim = pref_dim == 0 ? 0 : (enc.bins == 0 ? pref_dim : pref_dim * enc.bins);

  std::vector<int> policy_sizes;
  policy_sizes.push_back(net.state_dim + net.cond_dim);
  policy_sizes.insert(policy_sizes.end(), hidden.begin(), hidden.end());
  policy_sizes.push_back(env.action_count());
  net.policy = Mlp::create(policy_sizes, rng);

  std::vector<int> z_sizes;
  z_sizes.push_back(net.cond_dim == 0 ? 1 : net.cond_dim);
  z_sizes.insert(z_sizes.end(), hidden.begin(), hidden.end());
  z_sizes.push_back(1);
  net.log_z = Mlp::create(z_sizes, rng);
  return net;
}

std::vector<double> ConditionalPolicyNet::encode_cond(const Preference& w) const {
  if (cond_dim == 0) return {};
  auto enc = encode_preference(w, pref_encoding);
  if (static_cast<int>(enc.size()) != cond_dim) {
    throw std::invalid_argument("ConditionalPolicyNet: preference dimension mismatch");
  }
  return enc;
}

std::vector<double> ConditionalPolicyNet::log_z_input(const std::vector<double>& cond) const {
  if (cond_dim == 0) return {1.0};
  return cond;
}

double ConditionalPolicyNet::log_z_value(const std::vector<double>& cond) const {
  return log_z.forward(log_z_input(cond))[0];
}

PolicyGrads PolicyGrads::like(const ConditionalPolicyNet& net) {
  return PolicyGrads{MlpGrads::like(net.policy), MlpGrads::like(net.log_z)};
}

void PolicyGrads::zero() {
  policy.zero();
  log_z.zero();
}

void PolicyGrads::scale(double s) {
  policy.scale(s);
  log_z.scale(s);
}

bool PolicyGrads::finite() const { return policy.finite() && log_z.finite(); }

PolicyAdam PolicyAdam::like(const ConditionalPolicyNet& net, double lr_pf, double lr_z) {
  return PolicyAdam{AdamState::like(net.policy, lr_pf), AdamState::like(net.log_z, lr_z)};
}

bool adam_step(ConditionalPolicyNet& net, const PolicyGrads& grads, PolicyAdam& state) {
  if (!grads.finite()) return false;
  adam_step(net.policy, grads.policy, state.policy);
  adam_step(net.log_z, grads.log_z, state.log_z);
  return true;
}

namespace {

// Policy-net input: state encoding followed by the encoded preference.
void build_input(const Env& env, const EnvState& s, const std::vector<double>& cond,
                 std::vector<double>& state_buf, std::vector<double>& input) {
  env.state_encoding(s, state_buf);
  input.resize(state_buf.size() + cond.size());
  std::copy(state_buf.begin(), state_buf.end(), input.begin());
  std::copy(cond.begin(), cond.end(), input.begin() + static_cast<std::ptrdiff_t>(state_buf.size()));
}

int sample_index(const std::vector<double>& probs, Rng& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

double log_pb_uniform_parents(const Env& env, const Trajectory& traj) {
  if (env.tree_structured()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    auto parents = env.parents(traj.states[i]);
    if (parents.empty()) {
      throw std::logic_error("log_pb_uniform_parents: reached state has no parents");
    }
    sum -= std::log(static_cast<double>(parents.size()));
  }
  return sum;
}

Trajectory sample_trajectory(const ConditionalPolicyNet& net, const Env& env,
                             const Preference& w, double delta, Rng& rng) {
  if (delta < 0.0 || delta >= 1.0) {
    throw std::invalid_argument("sample_trajectory: delta must be in [0,1)");
  }
  Trajectory traj;
  traj.preference = w;
  auto cond = net.encode_cond(w);
  std::vector<double> state_buf, input;
  EnvState s = env.initial_state();
  traj.states.push_back(s);
  while (!env.is_terminal(s)) {
    build_input(env, s, cond, state_buf, input);
    auto logits = net.policy.forward(input);
    auto mask = env.action_mask(s);
    auto probs = masked_softmax(logits, mask);
    int valid_count = 0;
    for (auto m : mask) valid_count += m;
    std::vector<double> mixed(probs.size());
    for (std::size_t a = 0; a < probs.size(); ++a) {
      double uniform = mask[a] ? 1.0 / valid_count : 0.0;
      mixed[a] = (1.0 - delta) * probs[a] + delta * uniform;
    }
    int action = sample_index(mixed, rng);
    traj.log_pf += std::log(probs[static_cast<std::size_t>(action)]);
    s = env.apply(s, action);
    traj.actions.push_back(action);
    traj.states.push_back(s);
  }
  traj.log_pb = log_pb_uniform_parents(env, traj);
  return traj;
}

double scalarized_reward(const Scalarization& s, double beta, double floor,
                         const ObjectiveVector& objectives, const Preference& w) {
  return std::max(std::pow(scalarize(s, objectives, w), beta), floor);
}

double tb_loss(const ConditionalPolicyNet& net, const Env& env, const Trajectory& traj,
               double reward, PolicyGrads* grads, double grad_scale) {
  if (!(reward > 0.0)) {
    throw std::invalid_argument("tb_loss: reward must be > 0 (floor it first)");
  }
  if (traj.states.empty() || !traj.states.back().terminal) {
    throw std::invalid_argument("tb_loss: trajectory must end in a terminal state");
  }
  auto cond = net.encode_cond(traj.preference);
  auto z_input = net.log_z_input(cond);

  ForwardCache z_cache;
  net.log_z.forward_cached(z_input, z_cache);
  double log_z = z_cache.output()[0];

  // Forward passes for every decision state; caches retained for backprop.
  std::size_t decisions = traj.actions.size();
  std::vector<ForwardCache> caches(decisions);
  std::vector<std::vector<double>> probs(decisions);
  std::vector<double> state_buf, input;
  double sum_log_pf = 0.0;
  for (std::size_t t = 0; t < decisions; ++t) {
    build_input(env, traj.states[t], cond, state_buf, input);
    net.policy.forward_cached(input, caches[t]);
    auto mask = env.action_mask(traj.states[t]);
    probs[t] = masked_softmax(caches[t].output(), mask);
    double p = probs[t][static_cast<std::size_t>(traj.actions[t])];
    sum_log_pf += std::log(p);
  }

  double residual = log_z + sum_log_pf - std::log(reward) - traj.log_pb;
  double loss = residual * residual;
  if (grads != nullptr) {
    double up = 2.0 * residual * grad_scale;
    std::vector<double> z_up{up};
    net.log_z.backward_cached(z_cache, z_up, grads->log_z, false);
    std::vector<double> logit_up;
    for (std::size_t t = 0; t < decisions; ++t) {
      logit_up.assign(probs[t].size(), 0.0);
      for (std::size_t a = 0; a < probs[t].size(); ++a) {
        double indicator = static_cast<int>(a) == traj.actions[t] ? 1.0 : 0.0;
        logit_up[a] = up * (indicator - probs[t][a]);
      }
      net.policy.backward_cached(caches[t], logit_up, grads->policy, false);
    }
  }
  return loss;
}

void TrainConfig::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("TrainConfig: beta must be > 0");
  if (delta < 0.0 || delta >= 1.0) {
    throw std::invalid_argument("TrainConfig: delta must be in [0,1)");
  }
  if (steps < 1) throw std::invalid_argument("TrainConfig: steps must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (!(lr_pf > 0.0) || !(lr_z > 0.0)) {
    throw std::invalid_argument("TrainConfig: learning rates must be > 0");
  }
  if (!(dirichlet_alpha > 0.0)) {
    throw std::invalid_argument("TrainConfig: dirichlet_alpha must be > 0");
  }
  if (!(reward_floor > 0.0)) {
    throw std::invalid_argument("TrainConfig: reward_floor must be > 0");
  }
  if (pref_bins < 0) throw std::invalid_argument("TrainConfig: pref_bins must be >= 0");
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("TrainConfig: hidden sizes must be >= 1");
  }
}

TrainResult train_mogfn_pc(const Env& env, const TrainConfig& cfg,
                           const StepCallback& callback) {
  cfg.validate();
  Rng rng(cfg.seed);
  ThermometerConfig enc{cfg.pref_bins, 0.0, 1.0};
  TrainResult result;
  result.net = ConditionalPolicyNet::create(env, env.num_objectives(), enc, cfg.hidden, rng);
  PolicyAdam adam = PolicyAdam::like(result.net, cfg.lr_pf, cfg.lr_z);
  PolicyGrads grads = PolicyGrads::like(result.net);
  DirichletParam dir{cfg.dirichlet_alpha, env.num_objectives()};

  for (int step = 0; step < cfg.steps; ++step) {
    Preference w = sample_preference(dir, rng);
    grads.zero();
    double loss_sum = 0.0;
    double inv_batch = 1.0 / cfg.batch_size;
    for (int b = 0; b < cfg.batch_size; ++b) {
      Trajectory traj = sample_trajectory(result.net, env, w, cfg.delta, rng);
      double reward = scalarized_reward(cfg.scalarization, cfg.beta, cfg.reward_floor,
                                        env.objectives(traj.terminal()), w);
      loss_sum += tb_loss(result.net, env, traj, reward, &grads, inv_batch);
    }
    double loss = loss_sum * inv_batch;
    result.losses.push_back(loss);
    if (!std::isfinite(loss) || !adam_step(result.net, grads, adam)) {
      ++result.skipped_steps;
    }
    if (callback) callback(step, loss, result.net);
  }
  result.failed = result.skipped_steps > cfg.steps / 100;
  return result;
}

std::map<EnvState, double> exact_distribution(
    const Env& env,
    const std::function<std::vector<double>(const EnvState&)>& action_probs,
    std::size_t max_states) {
  // Enumerate the reachable DAG.
  std::map<EnvState, int> index;
  std::vector<EnvState> states;
  std::vector<std::vector<std::pair<int, int>>> edges;  // (child, action)
  std::deque<int> frontier;
  EnvState root = env.initial_state();
  index[root] = 0;
  states.push_back(root);
  edges.emplace_back();
  frontier.push_back(0);
  while (!frontier.empty()) {
    int id = frontier.front();
    frontier.pop_front();
    EnvState s = states[static_cast<std::size_t>(id)];
    if (env.is_terminal(s)) continue;
    for (int a : env.valid_actions(s)) {
      EnvState next = env.apply(s, a);
      auto [it, inserted] = index.try_emplace(next, static_cast<int>(states.size()));
      if (inserted) {
        if (states.size() >= max_states) {
          throw std::runtime_error("exact_distribution: state budget exceeded");
        }
        states.push_back(next);
        edges.emplace_back();
        frontier.push_back(it->second);
      }
      edges[static_cast<std::size_t>(id)].emplace_back(it->second, a);
    }
  }

  // Topological order via Kahn over the discovered edges.
  std::vector<int> in_degree(states.size(), 0);
  for (const auto& out : edges) {
    for (auto [child, action] : out) ++in_degree[static_cast<std::size_t>(child)];
  }
  std::deque<int> ready;
  ready.push_back(0);
  std::vector<double> flow(states.size(), 0.0);
  flow[0] = 1.0;
  std::map<EnvState, double> terminal_mass;
  std::size_t processed = 0;
  while (!ready.empty()) {
    int id = ready.front();
    ready.pop_front();
    ++processed;
    const EnvState& s = states[static_cast<std::size_t>(id)];
    if (env.is_terminal(s)) {
      terminal_mass[s] += flow[static_cast<std::size_t>(id)];
    } else if (flow[static_cast<std::size_t>(id)] != 0.0) {
      auto probs = action_probs(s);
      if (static_cast<int>(probs.size()) != env.action_count()) {
        throw std::invalid_argument("exact_distribution: probability vector size mismatch");
      }
      for (auto [child, action] : edges[static_cast<std::size_t>(id)]) {
        flow[static_cast<std::size_t>(child)] +=
            flow[static_cast<std::size_t>(id)] * probs[static_cast<std::size_t>(action)];
      }
    }
    for (auto [child, action] : edges[static_cast<std::size_t>(id)]) {
      if (--in_degree[static_cast<std::size_t>(child)] == 0) {
        ready.push_back(child);
      }
    }
  }
  if (processed != states.size()) {
    throw std::logic_error("exact_distribution: transition graph has a cycle");
  }
  return terminal_mass;
}

std::map<EnvState, double> exact_policy_distribution(const ConditionalPolicyNet& net,
                                                     const Env& env, const Preference& w,
                                                     std::size_t max_states) {
  auto cond = net.encode_cond(w);
  auto probs_fn = [&](const EnvState& s) {
    std::vector<double> state_buf, input;
    build_input(env, s, cond, state_buf, input);
    auto logits = net.policy.forward(input);
    auto mask = env.action_mask(s);
    return masked_softmax(logits, mask);
  };
  return exact_distribution(env, probs_fn, max_states);
}

double l1_distribution_gap(const ConditionalPolicyNet& net, const Env& env,
                           const Preference& w, const Scalarization& s, double beta,
                           double reward_floor, std::size_t max_states) {
  auto pi = exact_policy_distribution(net, env, w, max_states);
  double z = 0.0;
  std::map<EnvState, double> target;
  for (const auto& [state, mass] : pi) {
    double r = scalarized_reward(s, beta, reward_floor, env.objectives(state), w);
    target[state] = r;
    z += r;
  }
  double gap = 0.0;
  for (const auto& [state, mass] : pi) {
    gap += std::abs(mass - target[state] / z);
  }
  return gap / static_cast<double>(pi.size());
}

std::vector<Candidate> sample_candidates(const ConditionalPolicyNet& net, const Env& env,
                                         const Preference& w, int n, Rng& rng) {
  if (n < 1) {
    throw std::invalid_argument("sample_candidates: n must be >= 1");
  }
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Trajectory traj = sample_trajectory(net, env, w, 0.0, rng);
    out.push_back(env.make_candidate(traj.terminal()));
  }
  return out;
}

}  // namespace mogfn
