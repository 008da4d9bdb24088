#include "mogfn/env.hpp"

#include <deque>
#include <set>
#include <stdexcept>

namespace mogfn {

std::string tokens_to_string(const std::vector<int>& tokens) {
  std::string out;
  out.reserve(tokens.size());
  for (int t : tokens) {
    if (t < 0 || t >= kAminoCount) {
      throw std::invalid_argument("tokens_to_string: token out of range");
    }
    out += kAminoAlphabet[static_cast<std::size_t>(t)];
  }
  return out;
}

std::vector<int> string_to_tokens(std::string_view text) {
  std::vector<int> out;
  out.reserve(text.size());
  for (char c : text) {
    auto pos = kAminoAlphabet.find(c);
    if (pos == std::string_view::npos) {
      throw std::invalid_argument(std::string("string_to_tokens: unknown letter '") + c + "'");
    }
    out.push_back(static_cast<int>(pos));
  }
  return out;
}

std::vector<std::uint8_t> Env::action_mask(const EnvState& s) const {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(action_count()), 0);
  for (int a : valid_actions(s)) {
    mask[static_cast<std::size_t>(a)] = 1;
  }
  return mask;
}

Candidate Env::make_candidate(const EnvState& terminal) const {
  if (!terminal.terminal) {
    throw std::invalid_argument("make_candidate: state is not terminal");
  }
  Candidate c;
  c.payload = payload(terminal);
  c.text = payload_text(terminal);
  c.objectives = objectives(terminal);
  return c;
}

std::vector<EnvState> enumerate_terminals(const Env& env, std::size_t max_states) {
  std::set<EnvState> seen;
  std::deque<EnvState> queue;
  std::vector<EnvState> terminals;
  EnvState root = env.initial_state();
  seen.insert(root);
  queue.push_back(root);
  while (!queue.empty()) {
    EnvState s = queue.front();
    queue.pop_front();
    if (env.is_terminal(s)) {
      terminals.push_back(s);
      continue;
    }
    for (int a : env.valid_actions(s)) {
      EnvState next = env.apply(s, a);
      if (seen.insert(next).second) {
        if (seen.size() > max_states) {
          throw std::runtime_error("enumerate_terminals: state budget exceeded");
        }
        queue.push_back(next);
      }
    }
  }
  return terminals;
}

}  // namespace mogfn
