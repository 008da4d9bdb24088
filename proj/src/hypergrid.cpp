#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mogfn/env.hpp"

namespace mogfn {

GridObjective grid_objective_from_name(std::string_view name) {
  if (name == "brannin" || name == "branin") return GridObjective::Brannin;
  if (name == "currin") return GridObjective::Currin;
  if (name == "sphere") return GridObjective::Sphere;
  if (name == "shubert") return GridObjective::Shubert;
  if (name == "beale") return GridObjective::Beale;
  throw std::invalid_argument("unknown grid objective: " + std::string(name));
}

std::string_view grid_objective_name(GridObjective f) {
  switch (f) {
    case GridObjective::Brannin: return "brannin";
    case GridObjective::Currin: return "currin";
    case GridObjective::Sphere: return "sphere";
    case GridObjective::Shubert: return "shubert";
    case GridObjective::Beale: return "beale";
  }
  return "?";
}

namespace {

double branin(double x1, double x2) {
  constexpr double pi = std::numbers::pi;
  const double a = 1.0;
  const double b = 5.1 / (4.0 * pi * pi);
  const double c = 5.0 / pi;
  const double r = 6.0;
  const double s = 10.0;
  const double t = 1.0 / (8.0 * pi);
  double term = x2 - b * x1 * x1 + c * x1 - r;
  return a * term * term + s * (1.0 - t) * std::cos(x1) + s;
}

double currin(double x1, double x2) {
  double factor = x2 == 0.0 ? 1.0 : 1.0 - std::exp(-1.0 / (2.0 * x2));
  double num = 2300.0 * x1 * x1 * x1 + 1900.0 * x1 * x1 + 2092.0 * x1 + 60.0;
  double den = 100.0 * x1 * x1 * x1 + 500.0 * x1 * x1 + 4.0 * x1 + 20.0;
  return factor * num / den;
}

double shubert(double x1, double x2) {
  double s1 = 0.0, s2 = 0.0;
  for (int i = 1; i <= 5; ++i) {
    s1 += i * std::cos((i + 1) * x1 + i);
    s2 += i * std::cos((i + 1) * x2 + i);
  }
  return s1 * s2;
}

double beale(double x1, double x2) {
  double t1 = 1.5 - x1 + x1 * x2;
  double t2 = 2.25 - x1 + x1 * x2 * x2;
  double t3 = 2.625 - x1 + x1 * x2 * x2 * x2;
  return t1 * t1 + t2 * t2 + t3 * t3;
}

}  // namespace

double grid_objective_raw(GridObjective f, double u0, double u1) {
  switch (f) {
    case GridObjective::Brannin:
      return branin(-5.0 + 15.0 * u0, 15.0 * u1);
    case GridObjective::Currin:
      return currin(u0, u1);
    case GridObjective::Sphere: {
      double x1 = -5.12 + 10.24 * u0;
      double x2 = -5.12 + 10.24 * u1;
      return x1 * x1 + x2 * x2;
    }
    case GridObjective::Shubert:
      return shubert(-10.0 + 20.0 * u0, -10.0 + 20.0 * u1);
    case GridObjective::Beale:
      return beale(-4.5 + 9.0 * u0, -4.5 + 9.0 * u1);
  }
  throw std::invalid_argument("grid_objective_raw: bad objective");
}

HyperGridEnv::HyperGridEnv(HyperGridConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.side < 2) {
    throw std::invalid_argument("HyperGridEnv: side must be >= 2");
  }
  if (cfg_.objectives.size() < 2) {
    throw std::invalid_argument("HyperGridEnv: need at least 2 objectives");
  }
  const int h = cfg_.side;
  const int d = static_cast<int>(cfg_.objectives.size());
  // Negate (all selected functions are minimization forms) and min-max
  // normalize each objective over the full grid.
  std::vector<std::vector<double>> raw(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    auto& col = raw[static_cast<std::size_t>(k)];
    col.resize(static_cast<std::size_t>(h) * h);
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < h; ++j) {
        double u0 = static_cast<double>(i) / (h - 1);
        double u1 = static_cast<double>(j) / (h - 1);
        col[static_cast<std::size_t>(i) * h + j] =
            -grid_objective_raw(cfg_.objectives[static_cast<std::size_t>(k)], u0, u1);
      }
    }
  }
  table_.resize(static_cast<std::size_t>(h) * h);
  for (int k = 0; k < d; ++k) {
    const auto& col = raw[static_cast<std::size_t>(k)];
    double lo = *std::min_element(col.begin(), col.end());
    double hi = *std::max_element(col.begin(), col.end());
    double span = hi > lo ? hi - lo : 1.0;
    for (std::size_t c = 0; c < col.size(); ++c) {
      table_[c].values.push_back((col[c] - lo) / span);
    }
  }
}

std::vector<int> HyperGridEnv::valid_actions(const EnvState& s) const {
  if (s.terminal) return {};
  std::vector<int> actions;
  if (s.tokens[0] < cfg_.side - 1) actions.push_back(kActionIncrement0);
  if (s.tokens[1] < cfg_.side - 1) actions.push_back(kActionIncrement1);
  actions.push_back(kActionStop);
  return actions;
}

EnvState HyperGridEnv::apply(const EnvState& s, int action) const {
  if (s.terminal) {
    throw std::invalid_argument("HyperGridEnv::apply: state is terminal");
  }
  EnvState next = s;
  switch (action) {
    case kActionIncrement0:
    case kActionIncrement1: {
      int axis = action;
      if (s.tokens[static_cast<std::size_t>(axis)] >= cfg_.side - 1) {
        throw std::invalid_argument("HyperGridEnv::apply: increment at boundary");
      }
      next.tokens[static_cast<std::size_t>(axis)] += 1;
      return next;
    }
    case kActionStop:
      next.terminal = true;
      return next;
    default:
      throw std::invalid_argument("HyperGridEnv::apply: unknown action");
  }
}

std::vector<std::pair<EnvState, int>> HyperGridEnv::parents(const EnvState& s) const {
  std::vector<std::pair<EnvState, int>> out;
  if (s.terminal) {
    out.emplace_back(EnvState{s.tokens, false}, kActionStop);
    return out;
  }
  if (s.tokens[0] > 0) {
    out.emplace_back(EnvState{{s.tokens[0] - 1, s.tokens[1]}, false}, kActionIncrement0);
  }
  if (s.tokens[1] > 0) {
    out.emplace_back(EnvState{{s.tokens[0], s.tokens[1] - 1}, false}, kActionIncrement1);
  }
  return out;
}

const ObjectiveVector& HyperGridEnv::cell_objectives(int i, int j) const {
  if (i < 0 || i >= cfg_.side || j < 0 || j >= cfg_.side) {
    throw std::invalid_argument("HyperGridEnv: cell outside grid");
  }
  return table_[static_cast<std::size_t>(i) * cfg_.side + j];
}

ObjectiveVector HyperGridEnv::objectives(const EnvState& terminal) const {
  if (!terminal.terminal) {
    throw std::invalid_argument("HyperGridEnv::objectives: state not terminal");
  }
  return cell_objectives(terminal.tokens[0], terminal.tokens[1]);
}

void HyperGridEnv::state_encoding(const EnvState& s, std::vector<double>& out) const {
  out.assign(static_cast<std::size_t>(encoding_size()), 0.0);
  out[static_cast<std::size_t>(s.tokens[0])] = 1.0;
  out[static_cast<std::size_t>(cfg_.side + s.tokens[1])] = 1.0;
}

std::string HyperGridEnv::payload_text(const EnvState& terminal) const {
  return std::to_string(terminal.tokens[0]) + "," + std::to_string(terminal.tokens[1]);
}

Front HyperGridEnv::true_front() const {
  std::vector<Candidate> cells;
  for (int i = 0; i < cfg_.side; ++i) {
    for (int j = 0; j < cfg_.side; ++j) {
      Candidate c;
      c.payload = {i, j};
      c.text = std::to_string(i) + "," + std::to_string(j);
      c.objectives = cell_objectives(i, j);
      cells.push_back(std::move(c));
    }
  }
  return nondominated_front(cells);
}

}  // namespace mogfn
