#pragma once

#include <cstdint>
#include <vector>

#include "mogfn/core.hpp"

namespace mogfn {

enum class ScalarizationKind : std::uint8_t {
  WeightedSum,
  WeightedTchebycheff,
  WeightedLogSum,
};

/// Scalarization choice plus its parameters. `utopian` empty means all-ones,
/// the ideal point for [0,1]-normalized maximization objectives.
struct Scalarization {
  ScalarizationKind kind = ScalarizationKind::WeightedSum;
  std::vector<double> utopian;  // empty = all ones
  double floor = 1e-8;

  void validate(int dim) const;
};

/// Symmetric Dirichlet over the d-simplex.
struct DirichletParam {
  double alpha = 1.0;
  int d = 2;

  void validate() const;
};

struct ThermometerConfig {
  int bins = 0;  // 0 = raw passthrough in encode_preference
  double lo = 0.0;
  double hi = 1.0;
};

/// Maps an objective vector and a preference to a single positive reward.
///   WeightedSum        sum_i w_i r_i
///   WeightedLogSum     prod_i max(r_i, floor)^{w_i}
///   WeightedTchebycheff 1 - max_i w_i |r_i - z*_i|
/// All results are clamped to [floor, 1] so downstream logs stay finite.
double scalarize(const Scalarization& s, const ObjectiveVector& r,
                 const Preference& w);

/// Draws a preference from Dirichlet(alpha) via normalized gamma variates.
/// Deterministic given the engine state.
Preference sample_preference(const DirichletParam& p, Rng& rng);

/// Monotone unary threshold code: bit i is 1 iff
/// (v - lo)/(hi - lo) >= (i+1)/bins, with v clamped into [lo, hi].
std::vector<std::uint8_t> thermometer_encode(double v, const ThermometerConfig& cfg);

/// Concatenated thermometer codes per preference component (length d*bins),
/// or the raw weights when bins == 0.
std::vector<double> encode_preference(const Preference& w, const ThermometerConfig& cfg);

}  // namespace mogfn
