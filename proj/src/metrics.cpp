#include "mogfn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mogfn {

namespace {

using Point = std::vector<double>;

// Skyline sweep over maximization boxes anchored at the origin-shifted ref.
double hv2(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    if (a[0] != b[0]) return a[0] > b[0];
    return a[1] > b[1];
  });
  double hv = 0.0;
  double best_y = 0.0;
  for (const auto& p : pts) {
    if (p[1] > best_y) {
      hv += p[0] * (p[1] - best_y);
      best_y = p[1];
    }
  }
  return hv;
}

double hv_rec(const std::vector<Point>& pts, int d) {
  if (pts.empty()) return 0.0;
  if (d == 1) {
    double mx = 0.0;
    for (const auto& p : pts) mx = std::max(mx, p[0]);
    return mx;
  }
  if (d == 2) return hv2(pts);
  // Slice along the last axis: between consecutive levels the (d-1)-volume
  // is constant and equals the HV of the points reaching that level.
  std::vector<double> levels;
  for (const auto& p : pts) {
    if (p[static_cast<std::size_t>(d - 1)] > 0.0) {
      levels.push_back(p[static_cast<std::size_t>(d - 1)]);
    }
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double hv = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    double level = levels[k];
    double next = k + 1 < levels.size() ? levels[k + 1] : 0.0;
    std::vector<Point> slab;
    for (const auto& p : pts) {
      if (p[static_cast<std::size_t>(d - 1)] >= level) {
        slab.emplace_back(p.begin(), p.end() - 1);
      }
    }
    hv += hv_rec(slab, d - 1) * (level - next);
  }
  return hv;
}

// Shift by ref and clip below it, so the recursion can assume a zero anchor.
std::vector<Point> shifted_points(const Front& front, const HvRef& ref) {
  int d = ref.point.dim();
  std::vector<Point> pts;
  pts.reserve(front.points.size());
  for (const auto& p : front.points) {
    if (p.dim() != d) {
      throw std::invalid_argument("hypervolume: dimension mismatch with reference");
    }
    Point q(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      q[static_cast<std::size_t>(i)] = std::max(p[i] - ref.point[i], 0.0);
    }
    pts.push_back(std::move(q));
  }
  return pts;
}

}  // namespace

double hypervolume(const Front& front, const HvRef& ref) {
  int d = ref.point.dim();
  if (d < 1) {
    throw std::invalid_argument("hypervolume: empty reference point");
  }
  if (d > 5) {
    throw std::invalid_argument("hypervolume: exact computation limited to d <= 5");
  }
  if (front.empty()) return 0.0;
  return hv_rec(shifted_points(front, ref), d);
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

namespace {

void das_dennis_rec(int d, int resolution, int pos, int remaining,
                    std::vector<int>& ks, std::vector<Preference>& out) {
  if (pos == d - 1) {
    ks[static_cast<std::size_t>(pos)] = remaining;
    std::vector<double> w(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      w[static_cast<std::size_t>(i)] =
          static_cast<double>(ks[static_cast<std::size_t>(i)]) / resolution;
    }
    out.push_back(Preference{std::move(w)});
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    ks[static_cast<std::size_t>(pos)] = k;
    das_dennis_rec(d, resolution, pos + 1, remaining - k, ks, out);
  }
}

}  // namespace

ReferenceVectorSet uniform_reference_vectors(int d, int resolution) {
  if (d < 1 || resolution < 1) {
    throw std::invalid_argument("uniform_reference_vectors: need d >= 1, resolution >= 1");
  }
  ReferenceVectorSet set;
  std::vector<int> ks(static_cast<std::size_t>(d));
  das_dennis_rec(d, resolution, 0, resolution, ks, set.vectors);
  set.utopian = ObjectiveVector(std::vector<double>(static_cast<std::size_t>(d), 1.0));
  return set;
}

double r2_indicator(const Front& front, const ReferenceVectorSet& refs) {
  if (front.empty()) {
    throw std::invalid_argument("r2_indicator: empty front");
  }
  if (refs.vectors.empty()) {
    throw std::invalid_argument("r2_indicator: empty reference set");
  }
  int d = refs.utopian.dim();
  double total = 0.0;
  for (const auto& lambda : refs.vectors) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : front.points) {
      if (p.dim() != d || lambda.dim() != d) {
        throw std::invalid_argument("r2_indicator: dimension mismatch");
      }
      double worst = 0.0;
      for (int i = 0; i < d; ++i) {
        worst = std::max(worst, lambda[i] * std::abs(refs.utopian[i] - p[i]));
      }
      best = std::min(best, worst);
    }
    total += best;
  }
  return total / static_cast<double>(refs.vectors.size());
}

double gd_plus(const Front& approx, const Front& truth) {
  if (approx.empty()) {
    throw std::invalid_argument("gd_plus: empty approximation front");
  }
  if (truth.empty()) {
    throw std::invalid_argument("gd_plus: empty truth front");
  }
  double total = 0.0;
  for (const auto& a : approx.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : truth.points) {
      if (a.dim() != t.dim()) {
        throw std::invalid_argument("gd_plus: dimension mismatch");
      }
      double sq = 0.0;
      for (int i = 0; i < a.dim(); ++i) {
        double deficit = std::max(0.0, t[i] - a[i]);
        sq += deficit * deficit;
      }
      best = std::min(best, std::sqrt(sq));
    }
    total += best;
  }
  return total / static_cast<double>(approx.size());
}

int edit_distance(std::span<const int> a, std::span<const int> b) {
  const std::size_t n = b.size();
  std::vector<int> row(n + 1);
  std::iota(row.begin(), row.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    int prev = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      int old = row[j];
      int sub = prev + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({sub, row[j] + 1, row[j - 1] + 1});
      prev = old;
    }
  }
  return row[n];
}

int edit_distance(std::string_view a, std::string_view b) {
  std::vector<int> ta(a.begin(), a.end());
  std::vector<int> tb(b.begin(), b.end());
  return edit_distance(std::span<const int>(ta), std::span<const int>(tb));
}

double payload_distance(std::span<const int> a, std::span<const int> b,
                        PayloadDistance kind) {
  switch (kind) {
    case PayloadDistance::Edit:
      return static_cast<double>(edit_distance(a, b));
    case PayloadDistance::L1Cell: {
      if (a.size() != b.size()) {
        throw std::invalid_argument("payload_distance: cell dimension mismatch");
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(static_cast<double>(a[i]) - b[i]);
      }
      return sum;
    }
  }
  throw std::invalid_argument("payload_distance: bad kind");
}

namespace {

// Indices of the k candidates with the highest scalarized reward, stable in
// input order for ties.
std::vector<int> topk_by_reward(const std::vector<Candidate>& set,
                                const Preference& pref, const Scalarization& s,
                                int k) {
  if (static_cast<int>(set.size()) < k) {
    throw std::invalid_argument("topk: candidate set smaller than k");
  }
  std::vector<std::pair<double, int>> scored;
  scored.reserve(set.size());
  for (int i = 0; i < static_cast<int>(set.size()); ++i) {
    scored.emplace_back(scalarize(s, set[static_cast<std::size_t>(i)].objectives, pref), i);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out.push_back(scored[static_cast<std::size_t>(i)].second);
  return out;
}

}  // namespace

double topk_reward(const std::vector<std::vector<Candidate>>& sets,
                   const std::vector<Preference>& prefs, const Scalarization& s,
                   int k) {
  if (sets.size() != prefs.size() || sets.empty()) {
    throw std::invalid_argument("topk_reward: sets and preferences must be parallel");
  }
  if (k < 1) {
    throw std::invalid_argument("topk_reward: k must be >= 1");
  }
  double total = 0.0;
  for (std::size_t p = 0; p < sets.size(); ++p) {
    double sum = 0.0;
    for (int i : topk_by_reward(sets[p], prefs[p], s, k)) {
      sum += scalarize(s, sets[p][static_cast<std::size_t>(i)].objectives, prefs[p]);
    }
    total += sum / k;
  }
  return total / static_cast<double>(sets.size());
}

double topk_diversity(const std::vector<std::vector<Candidate>>& sets,
                      const std::vector<Preference>& prefs, const Scalarization& s,
                      int k, PayloadDistance kind) {
  if (sets.size() != prefs.size() || sets.empty()) {
    throw std::invalid_argument("topk_diversity: sets and preferences must be parallel");
  }
  if (k < 2) {
    throw std::invalid_argument("topk_diversity: k must be >= 2");
  }
  double total = 0.0;
  for (std::size_t p = 0; p < sets.size(); ++p) {
    auto top = topk_by_reward(sets[p], prefs[p], s, k);
    double sum = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < top.size(); ++i) {
      for (std::size_t j = i + 1; j < top.size(); ++j) {
        const auto& a = sets[p][static_cast<std::size_t>(top[i])].payload;
        const auto& b = sets[p][static_cast<std::size_t>(top[j])].payload;
        sum += payload_distance(a, b, kind);
        ++pairs;
      }
    }
    total += sum / pairs;
  }
  return total / static_cast<double>(sets.size());
}

double mc_hypervolume_oracle(const Front& front, const HvRef& ref, int samples,
                             Rng& rng) {
  if (samples < 1) {
    throw std::invalid_argument("mc_hypervolume_oracle: samples must be >= 1");
  }
  if (front.empty()) return 0.0;
  int d = ref.point.dim();
  std::vector<double> hi(static_cast<std::size_t>(d),
                         -std::numeric_limits<double>::infinity());
  for (const auto& p : front.points) {
    if (p.dim() != d) {
      throw std::invalid_argument("mc_hypervolume_oracle: dimension mismatch");
    }
    for (int i = 0; i < d; ++i) {
      hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)], p[i]);
    }
  }
  double volume = 1.0;
  for (int i = 0; i < d; ++i) {
    volume *= std::max(0.0, hi[static_cast<std::size_t>(i)] - ref.point[i]);
  }
  if (volume <= 0.0) return 0.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(d));
  long hits = 0;
  for (int n = 0; n < samples; ++n) {
    for (int i = 0; i < d; ++i) {
      x[static_cast<std::size_t>(i)] =
          ref.point[i] + unit(rng) * (hi[static_cast<std::size_t>(i)] - ref.point[i]);
    }
    for (const auto& p : front.points) {
      bool covers = true;
      for (int i = 0; i < d; ++i) {
        if (p[i] < x[static_cast<std::size_t>(i)]) {
          covers = false;
          break;
        }
      }
      if (covers) {
        ++hits;
        break;
      }
    }
  }
  return volume * static_cast<double>(hits) / samples;
}

}  // namespace mogfn
