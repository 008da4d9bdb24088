#pragma once

#include <cstdint>
#include <vector>

#include "mogfn/gflownet.hpp"

namespace mogfn {

/// Preference-conditional REINFORCE sharing the ConditionalPolicyNet
/// architecture (the logZ head is simply unused). Serves as the
/// reward-maximizing contrast to the GFlowNet sampler.
struct ReinforceConfig {
  double lr = 0.01;
  int batch_size = 128;
  int steps = 1000;
  double entropy_weight = 0.0;
  double baseline_decay = 0.99;  // scalar moving-average baseline, one per run
  double dirichlet_alpha = 1.5;
  Scalarization scalarization;
  std::vector<int> hidden = {64, 64};
  int pref_bins = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Policy-gradient loss for one batch of trajectories with shared
/// preference: -(1/B) sum_b (G_b - baseline) * sum_t log P_F, minus the
/// entropy bonus when enabled. Gradients accumulate into `grads` when
/// non-null. Returns the loss value.
double reinforce_loss(const ConditionalPolicyNet& net, const Env& env,
                      const std::vector<Trajectory>& batch,
                      const std::vector<double>& returns, double baseline,
                      double entropy_weight, PolicyGrads* grads = nullptr);

/// Trains the policy with REINFORCE; returns are the scalarized terminal
/// rewards. The moving-average baseline updates once per step from the batch
/// mean.
TrainResult train_moreinforce(const Env& env, const ReinforceConfig& cfg,
                              const StepCallback& callback = nullptr);

}  // namespace mogfn
