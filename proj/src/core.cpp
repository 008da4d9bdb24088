#include "mogfn/core.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "mogfn/io.hpp"

namespace mogfn {

void ObjectiveVector::validate() const {
  if (values.empty()) {
    throw std::invalid_argument("ObjectiveVector: dimension must be >= 1");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("ObjectiveVector: non-finite component");
    }
    if (v < 0.0 || v > 1.0) {
      throw std::invalid_argument("ObjectiveVector: component outside [0,1]");
    }
  }
}

void Preference::validate() const {
  if (weights.empty()) {
    throw std::invalid_argument("Preference: dimension must be >= 1");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("Preference: negative weight");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("Preference: weights must sum to 1");
  }
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("dominates: dimension mismatch");
  }
  bool strict = false;
  for (int i = 0; i < a.dim(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

namespace {

// Indices surviving dedup + pairwise dominance scan, in input order.
std::vector<int> nondominated_indices(const std::vector<ObjectiveVector>& points) {
  std::vector<int> unique;
  unique.reserve(points.size());
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    bool dup = false;
    for (int j : unique) {
      if (points[static_cast<std::size_t>(j)] == points[static_cast<std::size_t>(i)]) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(i);
  }
  std::vector<int> keep;
  for (int i : unique) {
    bool dominated = false;
    for (int j : unique) {
      if (i != j && dominates(points[static_cast<std::size_t>(j)],
                              points[static_cast<std::size_t>(i)])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

}  // namespace

Front nondominated_filter(const std::vector<ObjectiveVector>& points) {
  Front front;
  for (int i : nondominated_indices(points)) {
    front.points.push_back(points[static_cast<std::size_t>(i)]);
  }
  return front;
}

Front nondominated_front(const std::vector<Candidate>& candidates) {
  std::vector<ObjectiveVector> points;
  points.reserve(candidates.size());
  for (const auto& c : candidates) points.push_back(c.objectives);
  Front front;
  for (int i : nondominated_indices(points)) {
    front.points.push_back(candidates[static_cast<std::size_t>(i)].objectives);
    front.payloads.push_back(candidates[static_cast<std::size_t>(i)].text);
  }
  return front;
}

std::string front_to_csv(const Front& front) {
  const bool with_payload = !front.payloads.empty();
  if (with_payload && front.payloads.size() != front.points.size()) {
    throw std::invalid_argument("front_to_csv: payloads not parallel to points");
  }
  int d = front.empty() ? 0 : front.points.front().dim();
  std::ostringstream out;
  for (int i = 0; i < d; ++i) {
    if (i) out << ',';
    out << "obj_" << i;
  }
  if (with_payload) out << ",payload";
  out << '\n';
  for (std::size_t r = 0; r < front.points.size(); ++r) {
    const auto& p = front.points[r];
    if (p.dim() != d) {
      throw std::invalid_argument("front_to_csv: mixed dimensions");
    }
    for (int i = 0; i < d; ++i) {
      if (i) out << ',';
      out << io::format_double(p[i]);
    }
    if (with_payload) {
      out << ",\"";
      for (char c : front.payloads[r]) {
        if (c == '"') out << "\"\"";
        else out << c;
      }
      out << '"';
    }
    out << '\n';
  }
  return out.str();
}

void write_front_csv(const Front& front, const std::string& path) {
  io::atomic_write_text(path, front_to_csv(front));
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

Front read_front_csv(const std::string& path) {
  std::istringstream in(io::read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_front_csv: empty file " + path);
  }
  auto header = split_csv_row(line);
  bool with_payload = !header.empty() && header.back() == "payload";
  int d = static_cast<int>(header.size()) - (with_payload ? 1 : 0);
  if (d < 1) {
    throw std::runtime_error("read_front_csv: no objective columns in " + path);
  }
  Front front;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_row(line);
    if (static_cast<int>(fields.size()) != d + (with_payload ? 1 : 0)) {
      throw std::runtime_error("read_front_csv: malformed row in " + path);
    }
    ObjectiveVector p;
    for (int i = 0; i < d; ++i) {
      p.values.push_back(std::strtod(fields[static_cast<std::size_t>(i)].c_str(), nullptr));
    }
    front.points.push_back(std::move(p));
    if (with_payload) front.payloads.push_back(fields.back());
  }
  return front;
}

}  // namespace mogfn
