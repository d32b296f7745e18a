#include "dgg/oracle.hpp"

#include <limits>
#include <map>

namespace dgg {

std::uint64_t situation_count(const Game& game) {
  std::uint64_t count = 1;
  for (int v : game.internals()) {
    std::uint64_t d = game.successors(v).size();
    if (count > std::numeric_limits<std::uint64_t>::max() / d)
      throw TooLargeError("instance too large: situation count overflows 64 bits");
    count *= d;
  }
  return count;
}

Situation situation_at(const Game& game, std::uint64_t index) {
  std::uint64_t count = situation_count(game);
  if (index >= count)
    throw ValidationError("situation index " + std::to_string(index) +
                          " out of range (count " + std::to_string(count) + ")");
  Situation sit;
  sit.choice.assign(game.position_count(), -1);
  const auto& internals = game.internals();
  for (int k = static_cast<int>(internals.size()) - 1; k >= 0; --k) {
    int v = internals[k];
    std::uint64_t d = game.successors(v).size();
    sit.choice[v] = game.successors(v)[index % d];
    index /= d;
  }
  return sit;
}

std::uint64_t situation_index(const Game& game, const Situation& sit) {
  validate_situation(game, sit);
  std::uint64_t index = 0;
  for (int v : game.internals()) {
    const auto& succ = game.successors(v);
    std::uint64_t digit = 0;
    while (succ[digit] != sit.choice[v]) ++digit;
    index = index * succ.size() + digit;
  }
  return index;
}

Certificate certify(const Game& game, bool want_all) {
  std::uint64_t count = situation_count(game);
  Certificate cert;
  Situation sit = situation_at(game, 0);
  const auto& internals = game.internals();
  // in-place odometer, least significant digit last, matching situation_at
  std::vector<size_t> digit(internals.size(), 0);
  for (std::uint64_t index = 0; index < count; ++index) {
    ++cert.examined;
    if (check_ne(game, sit).is_ne) {
      if (evaluate(game, sit).outcome.is_terminal())
        cert.terminal_nes.push_back(sit);
      else
        cert.other_nes.push_back(sit);
      if (!want_all) break;
    }
    for (int k = static_cast<int>(internals.size()) - 1; k >= 0; --k) {
      int v = internals[k];
      if (++digit[k] < game.successors(v).size()) {
        sit.choice[v] = game.successors(v)[digit[k]];
        break;
      }
      digit[k] = 0;
      sit.choice[v] = game.successors(v)[0];
    }
  }
  cert.tag = !cert.has_ne()              ? Certificate::Tag::NeFree
             : cert.terminal_nes.empty() ? Certificate::Tag::NoTerminalNe
                                         : Certificate::Tag::HasNe;
  return cert;
}

DynamicsRun improvement_dynamics(const Game& game, const Situation& start,
                                 int max_steps) {
  validate_situation(game, start);
  DynamicsRun run;
  std::map<std::vector<int>, int> seen;  // state -> index in the visit sequence
  Situation current = start;
  seen[current.choice] = 0;
  for (;;) {
    int mover = 0;
    Situation next;
    Outcome base = evaluate(game, current).outcome;
    for (int p = 1; p <= game.player_count() && mover == 0; ++p) {
      auto [best, best_sit] = best_response(game, current, p);
      if (game.prefers(p, best, base)) {
        mover = p;
        next = best_sit;
      }
    }
    if (mover == 0) {
      run.end = DynamicsRun::End::ReachedNe;
      return run;
    }
    if (static_cast<int>(run.steps.size()) >= max_steps) {
      run.end = DynamicsRun::End::StepLimit;
      return run;
    }
    run.steps.push_back(DynamicsStep{next, mover});
    auto [it, fresh] = seen.emplace(next.choice, static_cast<int>(run.steps.size()));
    if (!fresh) {
      run.end = DynamicsRun::End::ImprovementCycle;
      run.cycle_start = it->second;
      return run;
    }
    current = std::move(next);
  }
}

}  // namespace dgg
