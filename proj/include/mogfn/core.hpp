#pragma once

#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace mogfn {

using Rng = std::mt19937_64;

/// d objective values for one candidate, normalized to [0,1].
/// Maximization orientation throughout: environments normalize and orient
/// their rewards at construction.
struct ObjectiveVector {
  std::vector<double> values;

  ObjectiveVector() = default;
  explicit ObjectiveVector(std::vector<double> v) : values(std::move(v)) {}
  ObjectiveVector(std::initializer_list<double> v) : values(v) {}

  int dim() const { return static_cast<int>(values.size()); }
  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
  bool operator==(const ObjectiveVector&) const = default;

  // Throws std::invalid_argument if empty, non-finite, or outside [0,1].
  void validate() const;
};

/// Point on the d-simplex weighting the objectives.
struct Preference {
  std::vector<double> weights;

  Preference() = default;
  explicit Preference(std::vector<double> w) : weights(std::move(w)) {}
  Preference(std::initializer_list<double> w) : weights(w) {}

  int dim() const { return static_cast<int>(weights.size()); }
  double operator[](int i) const { return weights[static_cast<std::size_t>(i)]; }
  bool operator==(const Preference&) const = default;

  // Throws std::invalid_argument unless all weights >= 0 and sum to 1
  // within 1e-9.
  void validate() const;
};

/// Terminal object of an environment together with its objective vector.
/// `payload` holds the raw terminal tokens (grid coordinates or sequence
/// letters); `text` is the printable form used in CSV exports.
struct Candidate {
  std::vector<int> payload;
  std::string text;
  ObjectiveVector objectives;
};

/// A set of objective vectors, optionally with candidate payload texts.
/// `payloads` is either empty or parallel to `points`.
struct Front {
  std::vector<ObjectiveVector> points;
  std::vector<std::string> payloads;

  int size() const { return static_cast<int>(points.size()); }
  bool empty() const { return points.empty(); }
};

/// True iff a >= b componentwise with strict improvement somewhere.
/// Throws std::invalid_argument on dimension mismatch.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Keeps exactly the points not dominated by any other input point.
/// Exact duplicates are removed first (first occurrence wins) and the
/// surviving points keep their input order, so fronts are deterministic.
Front nondominated_filter(const std::vector<ObjectiveVector>& points);

/// Same filter over candidates, carrying payload text into the front.
Front nondominated_front(const std::vector<Candidate>& candidates);

/// Front CSV: header obj_0..obj_{d-1}[,payload], one row per point, written
/// atomically. Payload fields are always double-quoted.
void write_front_csv(const Front& front, const std::string& path);
Front read_front_csv(const std::string& path);
std::string front_to_csv(const Front& front);

}  // namespace mogfn
