#include <algorithm>
#include <stdexcept>

#include "mogfn/env.hpp"

namespace mogfn {

std::vector<int> ngram_counts(std::string_view x, const std::vector<std::string>& patterns) {
  std::vector<int> counts(patterns.size(), 0);
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const auto& pat = patterns[p];
    if (pat.empty() || pat.size() > x.size()) continue;
    for (std::size_t start = 0; start + pat.size() <= x.size(); ++start) {
      if (x.compare(start, pat.size(), pat) == 0) ++counts[p];
    }
  }
  return counts;
}

NGramsEnv::NGramsEnv(NGramsConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.max_len < 1) {
    throw std::invalid_argument("NGramsEnv: max_len must be >= 1");
  }
  if (cfg_.patterns.empty()) {
    throw std::invalid_argument("NGramsEnv: need at least one pattern");
  }
  if (cfg_.alphabet_size < 1 || cfg_.alphabet_size > kAminoCount) {
    throw std::invalid_argument("NGramsEnv: alphabet_size must be in [1,20]");
  }
  for (const auto& p : cfg_.patterns) {
    if (p.empty()) {
      throw std::invalid_argument("NGramsEnv: empty pattern");
    }
    if (static_cast<int>(p.size()) > cfg_.max_len) {
      throw std::invalid_argument("NGramsEnv: pattern longer than max_len");
    }
    auto tokens = string_to_tokens(p);  // validates letters
    for (int t : tokens) {
      if (t >= cfg_.alphabet_size) {
        throw std::invalid_argument("NGramsEnv: pattern letter outside alphabet");
      }
    }
    pattern_tokens_.push_back(std::move(tokens));
  }
}

std::vector<int> NGramsEnv::valid_actions(const EnvState& s) const {
  if (s.terminal) return {};
  std::vector<int> actions;
  actions.reserve(static_cast<std::size_t>(cfg_.alphabet_size) + 1);
  for (int a = 0; a < cfg_.alphabet_size; ++a) actions.push_back(a);
  if (!s.tokens.empty()) actions.push_back(kEosToken);  // no empty candidates
  return actions;
}

EnvState NGramsEnv::apply(const EnvState& s, int action) const {
  if (s.terminal) {
    throw std::invalid_argument("NGramsEnv::apply: state is terminal");
  }
  EnvState next = s;
  if (action == kEosToken) {
    if (s.tokens.empty()) {
      throw std::invalid_argument("NGramsEnv::apply: EOS on empty sequence");
    }
    next.terminal = true;
    return next;
  }
  if (action < 0 || action >= cfg_.alphabet_size) {
    throw std::invalid_argument("NGramsEnv::apply: unknown action");
  }
  if (static_cast<int>(s.tokens.size()) >= cfg_.max_len) {
    throw std::invalid_argument("NGramsEnv::apply: sequence already at max_len");
  }
  next.tokens.push_back(action);
  if (static_cast<int>(next.tokens.size()) == cfg_.max_len) {
    next.terminal = true;
  }
  return next;
}

std::vector<std::pair<EnvState, int>> NGramsEnv::parents(const EnvState& s) const {
  std::vector<std::pair<EnvState, int>> out;
  if (s.terminal) {
    if (static_cast<int>(s.tokens.size()) == cfg_.max_len) {
      EnvState parent{std::vector<int>(s.tokens.begin(), s.tokens.end() - 1), false};
      out.emplace_back(std::move(parent), s.tokens.back());
    } else {
      out.emplace_back(EnvState{s.tokens, false}, kEosToken);
    }
    return out;
  }
  if (!s.tokens.empty()) {
    EnvState parent{std::vector<int>(s.tokens.begin(), s.tokens.end() - 1), false};
    out.emplace_back(std::move(parent), s.tokens.back());
  }
  return out;
}

ObjectiveVector NGramsEnv::objectives(const EnvState& terminal) const {
  if (!terminal.terminal) {
    throw std::invalid_argument("NGramsEnv::objectives: state not terminal");
  }
  ObjectiveVector r;
  std::string x = tokens_to_string(terminal.tokens);
  auto counts = ngram_counts(x, cfg_.patterns);
  for (std::size_t p = 0; p < cfg_.patterns.size(); ++p) {
    double denom = cfg_.max_len - static_cast<double>(cfg_.patterns[p].size()) + 1.0;
    r.values.push_back(counts[p] / denom);
  }
  return r;
}

void NGramsEnv::state_encoding(const EnvState& s, std::vector<double>& out) const {
  out.assign(static_cast<std::size_t>(encoding_size()), 0.0);
  const int vocab = kAminoCount + 1;
  for (std::size_t pos = 0; pos < s.tokens.size(); ++pos) {
    out[pos * vocab + static_cast<std::size_t>(s.tokens[pos])] = 1.0;
  }
  out.back() = static_cast<double>(s.tokens.size()) / cfg_.max_len;
}

std::string NGramsEnv::payload_text(const EnvState& terminal) const {
  return tokens_to_string(terminal.tokens);
}

}  // namespace mogfn
