#include <algorithm>
#include <stdexcept>

#include "mogfn/env.hpp"

namespace mogfn {

std::vector<int> mutation_apply(const std::vector<int>& base, const std::vector<Mutation>& m) {
  std::vector<int> out = base;
  std::vector<bool> used(base.size(), false);
  for (const auto& mut : m) {
    if (mut.location < 0 || mut.location >= static_cast<int>(base.size())) {
      throw std::invalid_argument("mutation_apply: location out of range");
    }
    if (used[static_cast<std::size_t>(mut.location)]) {
      throw std::invalid_argument("mutation_apply: duplicate location");
    }
    if (mut.value < 0 || mut.value >= kAminoCount) {
      throw std::invalid_argument("mutation_apply: value out of range");
    }
    used[static_cast<std::size_t>(mut.location)] = true;
    out[static_cast<std::size_t>(mut.location)] = mut.value;
  }
  return out;
}

MutationEnv::MutationEnv(MutationConfig cfg,
                         std::function<ObjectiveVector(const std::vector<int>&)> oracle,
                         int oracle_dim)
    : cfg_(std::move(cfg)),
      pad_len_(cfg_.pad_len > 0 ? cfg_.pad_len : static_cast<int>(cfg_.base.size())),
      oracle_(std::move(oracle)),
      oracle_dim_(oracle_dim) {
  if (cfg_.base.empty()) {
    throw std::invalid_argument("MutationEnv: empty base sequence");
  }
  if (pad_len_ < static_cast<int>(cfg_.base.size())) {
    throw std::invalid_argument("MutationEnv: pad_len shorter than base");
  }
  if (cfg_.max_mutations < 1 || cfg_.max_mutations > static_cast<int>(cfg_.base.size())) {
    throw std::invalid_argument("MutationEnv: max_mutations out of range");
  }
  for (int t : cfg_.base) {
    if (t < 0 || t >= kAminoCount) {
      throw std::invalid_argument("MutationEnv: base token out of range");
    }
  }
}

std::vector<Mutation> MutationEnv::mutations_of(const EnvState& s) const {
  std::vector<Mutation> m;
  m.reserve(s.tokens.size() / 2);
  for (std::size_t i = 0; i + 1 < s.tokens.size(); i += 2) {
    m.push_back(Mutation{s.tokens[i], s.tokens[i + 1]});
  }
  return m;
}

std::vector<int> MutationEnv::mutated_sequence(const EnvState& s) const {
  return mutation_apply(cfg_.base, mutations_of(s));
}

std::vector<int> MutationEnv::valid_actions(const EnvState& s) const {
  if (s.terminal) return {};
  std::vector<int> actions;
  auto applied = mutations_of(s);
  int count = static_cast<int>(applied.size());
  if (count < cfg_.max_mutations) {
    std::vector<bool> used(cfg_.base.size(), false);
    for (const auto& m : applied) used[static_cast<std::size_t>(m.location)] = true;
    for (int loc = 0; loc < static_cast<int>(cfg_.base.size()); ++loc) {
      if (used[static_cast<std::size_t>(loc)]) continue;
      for (int val = 0; val < kAminoCount; ++val) {
        actions.push_back(loc * kAminoCount + val);
      }
    }
  }
  if (count >= 1) actions.push_back(stop_action());
  return actions;
}

EnvState MutationEnv::apply(const EnvState& s, int action) const {
  if (s.terminal) {
    throw std::invalid_argument("MutationEnv::apply: state is terminal");
  }
  if (action == stop_action()) {
    if (s.tokens.empty()) {
      throw std::invalid_argument("MutationEnv::apply: stop before any mutation");
    }
    EnvState next = s;
    next.terminal = true;
    return next;
  }
  if (action < 0 || action >= pad_len_ * kAminoCount) {
    throw std::invalid_argument("MutationEnv::apply: unknown action");
  }
  Mutation m{action / kAminoCount, action % kAminoCount};
  if (m.location >= static_cast<int>(cfg_.base.size())) {
    throw std::invalid_argument("MutationEnv::apply: location beyond base");
  }
  auto applied = mutations_of(s);
  if (static_cast<int>(applied.size()) >= cfg_.max_mutations) {
    throw std::invalid_argument("MutationEnv::apply: mutation budget exhausted");
  }
  for (const auto& prev : applied) {
    if (prev.location == m.location) {
      throw std::invalid_argument("MutationEnv::apply: location already mutated");
    }
  }
  applied.push_back(m);
  std::sort(applied.begin(), applied.end());  // canonical set representation
  EnvState next;
  next.tokens.reserve(applied.size() * 2);
  for (const auto& mut : applied) {
    next.tokens.push_back(mut.location);
    next.tokens.push_back(mut.value);
  }
  return next;
}

std::vector<std::pair<EnvState, int>> MutationEnv::parents(const EnvState& s) const {
  std::vector<std::pair<EnvState, int>> out;
  if (s.terminal) {
    out.emplace_back(EnvState{s.tokens, false}, stop_action());
    return out;
  }
  auto applied = mutations_of(s);
  for (std::size_t drop = 0; drop < applied.size(); ++drop) {
    EnvState parent;
    for (std::size_t i = 0; i < applied.size(); ++i) {
      if (i == drop) continue;
      parent.tokens.push_back(applied[i].location);
      parent.tokens.push_back(applied[i].value);
    }
    out.emplace_back(std::move(parent),
                     applied[drop].location * kAminoCount + applied[drop].value);
  }
  return out;
}

ObjectiveVector MutationEnv::objectives(const EnvState& terminal) const {
  if (!terminal.terminal) {
    throw std::invalid_argument("MutationEnv::objectives: state not terminal");
  }
  if (!oracle_) {
    throw std::runtime_error("MutationEnv::objectives: no oracle wired");
  }
  return oracle_(mutated_sequence(terminal));
}

void MutationEnv::state_encoding(const EnvState& s, std::vector<double>& out) const {
  out.assign(static_cast<std::size_t>(encoding_size()), 0.0);
  const int vocab = kAminoCount + 1;
  auto seq = mutated_sequence(s);
  for (std::size_t pos = 0; pos < seq.size(); ++pos) {
    out[pos * static_cast<std::size_t>(vocab) + static_cast<std::size_t>(seq[pos])] = 1.0;
  }
  std::size_t mask_offset = static_cast<std::size_t>(pad_len_) * vocab;
  for (const auto& m : mutations_of(s)) {
    out[mask_offset + static_cast<std::size_t>(m.location)] = 1.0;
  }
}

std::string MutationEnv::payload_text(const EnvState& terminal) const {
  return tokens_to_string(mutated_sequence(terminal));
}

std::vector<int> MutationEnv::payload(const EnvState& terminal) const {
  return mutated_sequence(terminal);
}

}  // namespace mogfn
