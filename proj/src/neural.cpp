#include "mogfn/neural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mogfn {

Mlp Mlp::create(const std::vector<int>& layer_sizes, Rng& rng) {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("Mlp: need at least input and output sizes");
  }
  for (int s : layer_sizes) {
    if (s < 1) throw std::invalid_argument("Mlp: layer sizes must be >= 1");
  }
  Mlp net;
  net.sizes = layer_sizes;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    DenseLayer layer;
    layer.in = layer_sizes[l];
    layer.out = layer_sizes[l + 1];
    double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    layer.w.resize(static_cast<std::size_t>(layer.in) * layer.out);
    layer.b.resize(static_cast<std::size_t>(layer.out));
    for (auto& x : layer.w) x = dist(rng);
    for (auto& x : layer.b) x = dist(rng);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

std::int64_t Mlp::parameter_count() const {
  std::int64_t n = 0;
  for (const auto& l : layers) {
    n += static_cast<std::int64_t>(l.w.size()) + static_cast<std::int64_t>(l.b.size());
  }
  return n;
}

namespace {

// z = b + W x, skipping zero inputs. State encodings are mostly one-hot, so
// the sparse path dominates in training.
void affine_forward(const DenseLayer& layer, std::span<const double> x,
                    std::vector<double>& z) {
  z.assign(layer.b.begin(), layer.b.end());
  int nnz = 0;
  for (int i = 0; i < layer.in; ++i) {
    if (x[static_cast<std::size_t>(i)] != 0.0) ++nnz;
  }
  if (nnz * 2 >= layer.in) {
    for (int o = 0; o < layer.out; ++o) {
      const double* row = layer.w.data() + static_cast<std::size_t>(o) * layer.in;
      double acc = 0.0;
      for (int i = 0; i < layer.in; ++i) acc += row[i] * x[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(o)] += acc;
    }
  } else {
    for (int i = 0; i < layer.in; ++i) {
      double xi = x[static_cast<std::size_t>(i)];
      if (xi == 0.0) continue;
      const double* col = layer.w.data() + i;
      for (int o = 0; o < layer.out; ++o) {
        z[static_cast<std::size_t>(o)] += col[static_cast<std::size_t>(o) * layer.in] * xi;
      }
    }
  }
}

}  // namespace

void Mlp::forward_cached(std::span<const double> input, ForwardCache& cache) const {
  if (static_cast<int>(input.size()) != input_size()) {
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  }
  cache.input.assign(input.begin(), input.end());
  cache.activations.resize(layers.size());
  std::span<const double> x = input;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& act = cache.activations[l];
    affine_forward(layers[l], x, act);
    if (l + 1 < layers.size()) {
      for (auto& v : act) {
        if (v < 0.0) v *= leaky_slope;
      }
    }
    x = act;
  }
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  ForwardCache cache;
  forward_cached(input, cache);
  return cache.output();
}

std::vector<double> Mlp::backward_cached(const ForwardCache& cache,
                                         std::span<const double> upstream,
                                         MlpGrads& grads,
                                         bool want_input_grad) const {
  if (static_cast<int>(upstream.size()) != output_size()) {
    throw std::invalid_argument("Mlp::backward: upstream size mismatch");
  }
  if (grads.layers.size() != layers.size()) {
    throw std::invalid_argument("Mlp::backward: grads shape mismatch");
  }
  std::vector<double> delta(upstream.begin(), upstream.end());
  std::vector<double> next_delta;
  for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
    const auto& layer = layers[static_cast<std::size_t>(l)];
    auto& g = grads.layers[static_cast<std::size_t>(l)];
    const std::vector<double>& below =
        l == 0 ? cache.input : cache.activations[static_cast<std::size_t>(l - 1)];

    for (int o = 0; o < layer.out; ++o) {
      g.b[static_cast<std::size_t>(o)] += delta[static_cast<std::size_t>(o)];
    }
    // dW = delta * below^T, skipping zero activations.
    for (int i = 0; i < layer.in; ++i) {
      double a = below[static_cast<std::size_t>(i)];
      if (a == 0.0) continue;
      double* col = g.w.data() + i;
      for (int o = 0; o < layer.out; ++o) {
        col[static_cast<std::size_t>(o) * layer.in] += delta[static_cast<std::size_t>(o)] * a;
      }
    }
    if (l == 0 && !want_input_grad) return {};

    // delta_below = W^T delta, times the LeakyReLU derivative for hidden
    // layers (recovered from the sign of the cached activation).
    next_delta.assign(static_cast<std::size_t>(layer.in), 0.0);
    for (int o = 0; o < layer.out; ++o) {
      double d = delta[static_cast<std::size_t>(o)];
      if (d == 0.0) continue;
      const double* row = layer.w.data() + static_cast<std::size_t>(o) * layer.in;
      for (int i = 0; i < layer.in; ++i) {
        next_delta[static_cast<std::size_t>(i)] += row[i] * d;
      }
    }
    if (l > 0) {
      for (int i = 0; i < layer.in; ++i) {
        if (below[static_cast<std::size_t>(i)] < 0.0) {
          next_delta[static_cast<std::size_t>(i)] *= leaky_slope;
        }
      }
    }
    delta.swap(next_delta);
  }
  return delta;
}

std::vector<double> Mlp::backward(std::span<const double> input,
                                  std::span<const double> upstream, MlpGrads& grads,
                                  bool want_input_grad) const {
  ForwardCache cache;
  forward_cached(input, cache);
  return backward_cached(cache, upstream, grads, want_input_grad);
}

MlpGrads MlpGrads::like(const Mlp& net) {
  MlpGrads g;
  for (const auto& l : net.layers) {
    DenseLayer z;
    z.in = l.in;
    z.out = l.out;
    z.w.assign(l.w.size(), 0.0);
    z.b.assign(l.b.size(), 0.0);
    g.layers.push_back(std::move(z));
  }
  return g;
}

void MlpGrads::zero() {
  for (auto& l : layers) {
    std::fill(l.w.begin(), l.w.end(), 0.0);
    std::fill(l.b.begin(), l.b.end(), 0.0);
  }
}

void MlpGrads::add_scaled(const MlpGrads& other, double s) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t i = 0; i < layers[l].w.size(); ++i) {
      layers[l].w[i] += s * other.layers[l].w[i];
    }
    for (std::size_t i = 0; i < layers[l].b.size(); ++i) {
      layers[l].b[i] += s * other.layers[l].b[i];
    }
  }
}

void MlpGrads::scale(double s) {
  for (auto& l : layers) {
    for (auto& x : l.w) x *= s;
    for (auto& x : l.b) x *= s;
  }
}

bool MlpGrads::finite() const {
  for (const auto& l : layers) {
    for (double x : l.w) {
      if (!std::isfinite(x)) return false;
    }
    for (double x : l.b) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

AdamState AdamState::like(const Mlp& net, double lr) {
  AdamState st;
  st.lr = lr;
  auto zeros = MlpGrads::like(net);
  st.m = zeros.layers;
  st.v = zeros.layers;
  return st;
}

namespace {

void adam_update(std::vector<double>& p, const std::vector<double>& g,
                 std::vector<double>& m, std::vector<double>& v,
                 const AdamState& st, double corr1, double corr2) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = st.beta1 * m[i] + (1.0 - st.beta1) * g[i];
    v[i] = st.beta2 * v[i] + (1.0 - st.beta2) * g[i] * g[i];
    double mhat = m[i] / corr1;
    double vhat = v[i] / corr2;
    p[i] -= st.lr * mhat / (std::sqrt(vhat) + st.eps);
  }
}

}  // namespace

bool adam_step(Mlp& net, const MlpGrads& grads, AdamState& state) {
  if (!grads.finite()) return false;
  state.step += 1;
  double corr1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  double corr2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    adam_update(net.layers[l].w, grads.layers[l].w, state.m[l].w, state.v[l].w,
                state, corr1, corr2);
    adam_update(net.layers[l].b, grads.layers[l].b, state.m[l].b, state.v[l].b,
                state, corr1, corr2);
  }
  return true;
}

namespace {

constexpr double kMaskPenalty = -1e9;

std::vector<double> masked_logits(std::span<const double> logits,
                                  std::span<const std::uint8_t> mask) {
  if (!mask.empty() && mask.size() != logits.size()) {
    throw std::invalid_argument("masked_softmax: mask size mismatch");
  }
  if (logits.empty()) {
    throw std::invalid_argument("masked_softmax: empty logits");
  }
  bool any_valid = mask.empty();
  for (std::uint8_t m : mask) {
    if (m) {
      any_valid = true;
      break;
    }
  }
  if (!any_valid) {
    throw std::invalid_argument("masked_softmax: all entries masked");
  }
  std::vector<double> adj(logits.begin(), logits.end());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) adj[i] += kMaskPenalty;
  }
  return adj;
}

}  // namespace

std::vector<double> masked_softmax(std::span<const double> logits,
                                   std::span<const std::uint8_t> mask) {
  auto adj = masked_logits(logits, mask);
  double mx = *std::max_element(adj.begin(), adj.end());
  double sum = 0.0;
  for (auto& v : adj) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (auto& v : adj) v /= sum;
  return adj;
}

std::vector<double> masked_log_softmax(std::span<const double> logits,
                                       std::span<const std::uint8_t> mask) {
  auto adj = masked_logits(logits, mask);
  double mx = *std::max_element(adj.begin(), adj.end());
  double sum = 0.0;
  for (double v : adj) sum += std::exp(v - mx);
  double lse = mx + std::log(sum);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (!mask.empty() && !mask[i]) {
      adj[i] = -std::numeric_limits<double>::infinity();
    } else {
      adj[i] -= lse;
    }
  }
  return adj;
}

std::string mlp_to_checkpoint(const Mlp& net) {
  nlohmann::json tensors = nlohmann::json::array();
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    tensors.push_back({{"name", "layer" + std::to_string(l) + ".w"},
                       {"shape", {layer.out, layer.in}},
                       {"data", layer.w}});
    tensors.push_back({{"name", "layer" + std::to_string(l) + ".b"},
                       {"shape", {layer.out}},
                       {"data", layer.b}});
  }
  nlohmann::json doc = {{"sizes", net.sizes},
                        {"leaky_slope", net.leaky_slope},
                        {"tensors", tensors}};
  return doc.dump(2);
}

Mlp mlp_from_checkpoint(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  Mlp net;
  net.sizes = doc.at("sizes").get<std::vector<int>>();
  net.leaky_slope = doc.at("leaky_slope").get<double>();
  const auto& tensors = doc.at("tensors");
  net.layers.resize(net.sizes.size() - 1);
  for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
    net.layers[l].in = net.sizes[l];
    net.layers[l].out = net.sizes[l + 1];
  }
  for (const auto& t : tensors) {
    std::string name = t.at("name").get<std::string>();
    auto dot = name.find('.');
    std::size_t l = std::stoul(name.substr(5, dot - 5));
    if (l >= net.layers.size()) {
      throw std::runtime_error("mlp_from_checkpoint: tensor for unknown layer " + name);
    }
    auto data = t.at("data").get<std::vector<double>>();
    if (name.substr(dot + 1) == "w") {
      if (data.size() != static_cast<std::size_t>(net.layers[l].in) * net.layers[l].out) {
        throw std::runtime_error("mlp_from_checkpoint: bad weight shape for " + name);
      }
      net.layers[l].w = std::move(data);
    } else {
      if (data.size() != static_cast<std::size_t>(net.layers[l].out)) {
        throw std::runtime_error("mlp_from_checkpoint: bad bias shape for " + name);
      }
      net.layers[l].b = std::move(data);
    }
  }
  for (const auto& layer : net.layers) {
    if (layer.w.empty() || layer.b.empty()) {
      throw std::runtime_error("mlp_from_checkpoint: missing tensors");
    }
  }
  return net;
}

}  // namespace mogfn
