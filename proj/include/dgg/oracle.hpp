#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dgg/game.hpp"

// Brute-force certification: situations are indexed by a mixed-radix code
// over the internal positions in name order (first position = most
// significant digit, digits index the sorted successor lists), so every
// enumeration below is deterministic and chunkable by index range.

namespace dgg {

/// Number of situations, i.e. the product of all out-degrees.
/// Throws TooLargeError if the product overflows 64 bits.
std::uint64_t situation_count(const Game& game);

Situation situation_at(const Game& game, std::uint64_t index);
std::uint64_t situation_index(const Game& game, const Situation& sit);

struct Certificate {
  enum class Tag {
    NeFree,        // no situation is an equilibrium
    HasNe,         // at least one equilibrium with a terminal outcome exists
    NoTerminalNe,  // equilibria exist but none has a terminal outcome
  };
  Tag tag = Tag::NeFree;
  std::uint64_t examined = 0;
  std::vector<Situation> terminal_nes;  // in index order
  std::vector<Situation> other_nes;     // equilibria with the infinite outcome

  bool has_ne() const { return !terminal_nes.empty() || !other_nes.empty(); }
};

/// Exhaustive scan with check_ne. With want_all the whole index range is
/// examined and every equilibrium is collected; otherwise the scan stops at
/// the first one (tag is then HasNe or NoTerminalNe by that one's outcome).
Certificate certify(const Game& game, bool want_all);

struct DynamicsStep {
  Situation situation;  // state after the move
  int player = 0;       // who moved (lowest-indexed improver, to best response)
};

struct DynamicsRun {
  enum class End { ReachedNe, ImprovementCycle, StepLimit };
  End end = End::StepLimit;
  std::vector<DynamicsStep> steps;
  // For ImprovementCycle: index of the first occurrence of the repeated state
  // in the sequence start, steps[0].situation, steps[1].situation, ...
  std::optional<int> cycle_start;
};

/// Best-response improvement dynamics: while the current situation is not an
/// equilibrium, the lowest-indexed player with a profitable deviation switches
/// to their best response. Deterministic, so a repeated state means a cycle.
DynamicsRun improvement_dynamics(const Game& game, const Situation& start,
                                 int max_steps);

}  // namespace dgg
