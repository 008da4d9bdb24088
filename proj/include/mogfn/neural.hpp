#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mogfn/core.hpp"

namespace mogfn {

/// One dense layer's parameters (or their gradients / Adam moments).
/// `w` is out x in, row-major.
struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> w;
  std::vector<double> b;
};

struct MlpGrads;
struct ForwardCache;

/// Dense MLP, LeakyReLU(0.01) on hidden layers, identity output, 64-bit
/// floats throughout. Initialization is uniform in +-1/sqrt(fan_in).
struct Mlp {
  std::vector<int> sizes;  // {in, hidden..., out}
  std::vector<DenseLayer> layers;
  double leaky_slope = 0.01;

  static Mlp create(const std::vector<int>& layer_sizes, Rng& rng);

  int input_size() const { return sizes.front(); }
  int output_size() const { return sizes.back(); }
  std::int64_t parameter_count() const;

  std::vector<double> forward(std::span<const double> input) const;

  /// Exact reverse-mode gradient of <upstream, forward(input)>.
  /// Parameter gradients accumulate into `grads`; returns d/d(input) unless
  /// `want_input_grad` is false (then returns empty).
  std::vector<double> backward(std::span<const double> input,
                               std::span<const double> upstream, MlpGrads& grads,
                               bool want_input_grad = true) const;

  // Split forward/backward so training loops can reuse the activations from
  // the sampling pass.
  void forward_cached(std::span<const double> input, ForwardCache& cache) const;
  std::vector<double> backward_cached(const ForwardCache& cache,
                                      std::span<const double> upstream,
                                      MlpGrads& grads,
                                      bool want_input_grad = true) const;
};

/// Post-activation values per layer for one forward pass.
struct ForwardCache {
  std::vector<double> input;
  std::vector<std::vector<double>> activations;  // activations.back() = output

  const std::vector<double>& output() const { return activations.back(); }
};

struct MlpGrads {
  std::vector<DenseLayer> layers;

  static MlpGrads like(const Mlp& net);
  void zero();
  void add_scaled(const MlpGrads& other, double scale);
  void scale(double s);
  bool finite() const;
};

/// Bias-corrected Adam. Defaults beta1=0.9, beta2=0.999, eps=1e-8.
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step = 0;
  std::vector<DenseLayer> m;
  std::vector<DenseLayer> v;

  static AdamState like(const Mlp& net, double lr);
};

/// One Adam update in place. Returns false (and leaves params and moments
/// untouched) when any gradient entry is non-finite.
bool adam_step(Mlp& net, const MlpGrads& grads, AdamState& state);

/// Softmax over `logits` with masked entries forced to probability zero via
/// an additive -1e9 before the stabilized exponentiation. `mask` entries are
/// 1 for valid actions. Throws std::invalid_argument when nothing is valid
/// or the sizes disagree; an empty mask means all entries are valid.
std::vector<double> masked_softmax(std::span<const double> logits,
                                   std::span<const std::uint8_t> mask);

/// log of masked_softmax, computed stably. Masked entries get -infinity.
std::vector<double> masked_log_softmax(std::span<const double> logits,
                                       std::span<const std::uint8_t> mask);

/// Checkpoints: JSON list of named tensors with shapes; round-trips
/// bit-exactly.
std::string mlp_to_checkpoint(const Mlp& net);
Mlp mlp_from_checkpoint(const std::string& text);

}  // namespace mogfn
