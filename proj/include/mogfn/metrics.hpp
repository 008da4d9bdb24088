#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mogfn/core.hpp"
#include "mogfn/scalarize.hpp"

namespace mogfn {

/// Hypervolume reference point; componentwise lower bound of the measured
/// region. Defaults to the origin for [0,1]-normalized maximization fronts.
struct HvRef {
  ObjectiveVector point;

  static HvRef origin(int d) {
    return HvRef{ObjectiveVector(std::vector<double>(static_cast<std::size_t>(d), 0.0))};
  }
};

/// Das-Dennis reference directions plus the utopian point z* (all-ones for
/// normalized maximization objectives).
struct ReferenceVectorSet {
  std::vector<Preference> vectors;
  ObjectiveVector utopian;
};

/// Lebesgue measure of the union of boxes [ref, p] over the front. Exact
/// coordinate sweep for d = 2, recursive slicing for 3 <= d <= 5; throws for
/// d > 5 (use the Monte Carlo oracle there). Points below ref are clipped.
double hypervolume(const Front& front, const HvRef& ref);

/// Simplex lattice {k/resolution : sum k = resolution}; contains
/// C(resolution + d - 1, d - 1) vectors.
ReferenceVectorSet uniform_reference_vectors(int d, int resolution);

/// R2(front, Lambda, z*) = mean over lambda of min over points of
/// max_i lambda_i |z*_i - p_i|. Lower is better; throws on an empty front.
double r2_indicator(const Front& front, const ReferenceVectorSet& refs);

/// Dominance-aware generational distance for maximization: mean over approx
/// points of min over truth points of sqrt(sum_i max(0, t_i - a_i)^2).
double gd_plus(const Front& approx, const Front& truth);

/// Levenshtein distance with unit insert/delete/substitute costs.
int edit_distance(std::span<const int> a, std::span<const int> b);
int edit_distance(std::string_view a, std::string_view b);

/// Distance between candidate payloads in the diversity metrics:
/// Levenshtein for sequences, L1 for grid cells.
enum class PayloadDistance : std::uint8_t { Edit, L1Cell };

double payload_distance(std::span<const int> a, std::span<const int> b,
                        PayloadDistance kind);

/// Per preference: mean scalarized reward (beta = 1) of the k best
/// candidates; averaged over preferences. `sets` is parallel to `prefs`.
double topk_reward(const std::vector<std::vector<Candidate>>& sets,
                   const std::vector<Preference>& prefs, const Scalarization& s,
                   int k);

/// Per preference: mean pairwise payload distance among the top-k candidates
/// by scalarized reward; averaged over preferences. Requires k >= 2.
double topk_diversity(const std::vector<std::vector<Candidate>>& sets,
                      const std::vector<Preference>& prefs, const Scalarization& s,
                      int k, PayloadDistance kind);

/// Box-sampling Monte Carlo hypervolume estimate (test oracle).
double mc_hypervolume_oracle(const Front& front, const HvRef& ref, int samples,
                             Rng& rng);

std::int64_t binomial(int n, int k);

}  // namespace mogfn
