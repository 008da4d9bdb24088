#include "mogfn/scalarize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mogfn {

void Scalarization::validate(int dim) const {
  if (floor <= 0.0) {
    throw std::invalid_argument("Scalarization: floor must be > 0");
  }
  if (!utopian.empty()) {
    if (static_cast<int>(utopian.size()) != dim) {
      throw std::invalid_argument("Scalarization: utopian dimension mismatch");
    }
    for (double z : utopian) {
      if (z < 0.0 || z > 1.0) {
        throw std::invalid_argument("Scalarization: utopian component outside [0,1]");
      }
    }
  }
}

void DirichletParam::validate() const {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("DirichletParam: alpha must be > 0");
  }
  if (d < 1) {
    throw std::invalid_argument("DirichletParam: d must be >= 1");
  }
}

double scalarize(const Scalarization& s, const ObjectiveVector& r,
                 const Preference& w) {
  if (r.dim() != w.dim()) {
    throw std::invalid_argument("scalarize: dimension mismatch");
  }
  s.validate(r.dim());
  double value = 0.0;
  switch (s.kind) {
    case ScalarizationKind::WeightedSum: {
      for (int i = 0; i < r.dim(); ++i) value += w[i] * r[i];
      break;
    }
    case ScalarizationKind::WeightedLogSum: {
      double log_value = 0.0;
      for (int i = 0; i < r.dim(); ++i) {
        log_value += w[i] * std::log(std::max(r[i], s.floor));
      }
      value = std::exp(log_value);
      break;
    }
    case ScalarizationKind::WeightedTchebycheff: {
      double worst = 0.0;
      for (int i = 0; i < r.dim(); ++i) {
        double z = s.utopian.empty() ? 1.0 : s.utopian[static_cast<std::size_t>(i)];
        worst = std::max(worst, w[i] * std::abs(r[i] - z));
      }
      value = 1.0 - worst;
      break;
    }
  }
  return std::clamp(value, s.floor, 1.0);
}

namespace {

double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Marsaglia-Tsang; the alpha < 1 case is boosted through alpha + 1.
double gamma_draw(double alpha, Rng& rng) {
  if (alpha < 1.0) {
    double u = std::max(uniform01(rng), 1e-300);
    return gamma_draw(alpha + 1.0, rng) * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = std::normal_distribution<double>(0.0, 1.0)(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform01(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(std::max(u, 1e-300)) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

}  // namespace

Preference sample_preference(const DirichletParam& p, Rng& rng) {
  p.validate();
  if (p.d == 1) return Preference{{1.0}};
  std::vector<double> w(static_cast<std::size_t>(p.d));
  double sum = 0.0;
  for (auto& wi : w) {
    wi = gamma_draw(p.alpha, rng);
    sum += wi;
  }
  if (sum <= 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / p.d);
    return Preference{std::move(w)};
  }
  for (auto& wi : w) wi /= sum;
  return Preference{std::move(w)};
}

std::vector<std::uint8_t> thermometer_encode(double v, const ThermometerConfig& cfg) {
  if (cfg.bins < 1) {
    throw std::invalid_argument("thermometer_encode: bins must be >= 1");
  }
  if (!(cfg.lo < cfg.hi)) {
    throw std::invalid_argument("thermometer_encode: requires lo < hi");
  }
  if (!std::isfinite(v)) {
    throw std::invalid_argument("thermometer_encode: non-finite value");
  }
  double t = (std::clamp(v, cfg.lo, cfg.hi) - cfg.lo) / (cfg.hi - cfg.lo);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(cfg.bins));
  for (int i = 0; i < cfg.bins; ++i) {
    bits[static_cast<std::size_t>(i)] =
        t >= static_cast<double>(i + 1) / cfg.bins ? 1 : 0;
  }
  return bits;
}

std::vector<double> encode_preference(const Preference& w, const ThermometerConfig& cfg) {
  if (cfg.bins == 0) return w.weights;
  std::vector<double> out;
  out.reserve(w.weights.size() * static_cast<std::size_t>(cfg.bins));
  for (double wi : w.weights) {
    for (std::uint8_t bit : thermometer_encode(wi, cfg)) {
      out.push_back(static_cast<double>(bit));
    }
  }
  return out;
}

}  // namespace mogfn
