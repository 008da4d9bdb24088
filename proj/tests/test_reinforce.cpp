#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mogfn/reinforce.hpp"
#include "test_util.hpp"

using namespace mogfn;
using namespace mogfn::testutil;

TEST_CASE("reinforce concentrates on the rewarding bandit arm") {
  BanditEnv env({1.0, 0.0});
  ReinforceConfig cfg;
  cfg.lr = 0.05;
  cfg.batch_size = 16;
  cfg.steps = 300;
  cfg.hidden = {8};
  cfg.seed = 5;
  TrainResult result = train_moreinforce(env, cfg);
  CHECK_FALSE(result.failed);
  auto dist = exact_policy_distribution(result.net, env, Preference{1.0});
  EnvState good{{0}, true};
  CHECK(dist.at(good) >= 0.99);

  // At the near-deterministic optimum the expected gradient vanishes.
  Rng rng(17);
  std::vector<Trajectory> batch;
  std::vector<double> returns;
  for (int i = 0; i < 64; ++i) {
    batch.push_back(sample_trajectory(result.net, env, Preference{1.0}, 0.0, rng));
    returns.push_back(
        scalarize(cfg.scalarization, env.objectives(batch.back().terminal()), Preference{1.0}));
  }
  double mean_return = 0.0;
  for (double g : returns) mean_return += g;
  mean_return /= static_cast<double>(returns.size());
  PolicyGrads grads = PolicyGrads::like(result.net);
  reinforce_loss(result.net, env, batch, returns, mean_return, 0.0, &grads);
  double norm = 0.0;
  for (const auto& layer : grads.policy.layers) {
    for (double g : layer.w) norm += g * g;
    for (double g : layer.b) norm += g * g;
  }
  CHECK(std::sqrt(norm) < 1e-2);
}

TEST_CASE("reinforce gradient matches finite differences") {
  Rng rng(23);
  HyperGridEnv env(HyperGridConfig{3, {GridObjective::Brannin, GridObjective::Currin}});
  for (int trial = 0; trial < 3; ++trial) {
    auto net = ConditionalPolicyNet::create(env, 2, ThermometerConfig{0, 0.0, 1.0}, {6}, rng);
    Preference w = sample_preference({1.0, 2}, rng);
    std::vector<Trajectory> batch;
    std::vector<double> returns;
    for (int b = 0; b < 3; ++b) {
      batch.push_back(sample_trajectory(net, env, w, 0.2, rng));
      returns.push_back(scalarize(Scalarization{}, env.objectives(batch.back().terminal()), w));
    }
    const double baseline = 0.3;
    const double entropy_weight = trial == 0 ? 0.0 : 0.1;
    PolicyGrads grads = PolicyGrads::like(net);
    reinforce_loss(net, env, batch, returns, baseline, entropy_weight, &grads);
    auto fd = fd_check_policy(net, grads, [&] {
      return reinforce_loss(net, env, batch, returns, baseline, entropy_weight);
    });
    CHECK(fd.relative_error() < 1e-4);
  }
}

TEST_CASE("zero learning rate leaves the policy untouched") {
  BanditEnv env({0.8, 0.2});
  ReinforceConfig cfg;
  cfg.lr = 0.0;
  cfg.batch_size = 4;
  cfg.steps = 25;
  cfg.hidden = {8};
  cfg.seed = 9;
  TrainResult result = train_moreinforce(env, cfg);

  Rng rng(cfg.seed);
  auto fresh = ConditionalPolicyNet::create(env, 1, ThermometerConfig{0, 0.0, 1.0},
                                            cfg.hidden, rng);
  for (std::size_t l = 0; l < fresh.policy.layers.size(); ++l) {
    CHECK(result.net.policy.layers[l].w == fresh.policy.layers[l].w);
    CHECK(result.net.policy.layers[l].b == fresh.policy.layers[l].b);
  }
}

TEST_CASE("reinforce training is reproducible") {
  BanditEnv env({1.0, 0.0});
  ReinforceConfig cfg;
  cfg.steps = 20;
  cfg.batch_size = 8;
  cfg.hidden = {8};
  cfg.seed = 31;
  TrainResult a = train_moreinforce(env, cfg);
  TrainResult b = train_moreinforce(env, cfg);
  CHECK(a.losses == b.losses);
  for (std::size_t l = 0; l < a.net.policy.layers.size(); ++l) {
    CHECK(a.net.policy.layers[l].w == b.net.policy.layers[l].w);
  }
}
