#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dgg/game.hpp"

// Constructive equilibrium search for play-once games (every player controls
// exactly one position). The solver first rewrites the game so each position
// keeps at most one terminal move and at least one non-terminal move, splits
// the positions into four regions, and then either confines the play to a
// cycle or runs backward induction on an acyclic restriction.

namespace dgg {

struct NormalizeStep {
  enum class Kind {
    DropWorseTerminals,  // several terminal moves: only the controller's best stays
    MergeIntoTerminal,   // all moves terminal: position absorbed by its best terminal
  };
  Kind kind;
  std::string pos;
  std::string terminal;
  // MergeIntoTerminal only: predecessors whose arc to pos was turned into a
  // fresh arc to the terminal (arcs that already existed are not listed).
  std::vector<std::string> redirected;
};

struct Normalized {
  Game game;
  std::vector<NormalizeStep> steps;
  std::vector<int> player_map;  // normalized player -> original player
  // Set when the initial position itself ends up with only a terminal move;
  // the game is then solved by taking it, and no further rewriting happens.
  bool init_absorbed = false;
};

Normalized normalize_play_once(const Game& game);

/// Pulls a situation on the normalized game back onto the original one.
/// Absorbed positions take their best terminal; redirected arcs are undone.
Situation lift_normalized(const Game& original, const Normalized& norm,
                          const Situation& sit);

struct Regions {
  // escape: positions holding a terminal move their controller strictly
  // prefers to the infinite outcome. start_region: positions reachable from
  // the initial one without entering escape (empty when init is an escape).
  // cycle_bound: remaining positions that can reach a cycle avoiding both.
  // acyclic_rest: everything else; it induces an acyclic subgraph.
  std::vector<int> escape, start_region, cycle_bound, acyclic_rest;
};

Regions partition(const Game& game);

/// Structural laws of the partition; throws on violation. Used by tests.
void verify_partition(const Game& game, const Regions& regions);

bool start_region_has_cycle(const Game& game, const Regions& regions);

/// A non-terminal equilibrium from a cycle inside the start region: the play
/// runs from the initial position onto the cycle and stays there; every other
/// position picks a non-terminating move.
Situation confined_cycle_ne(const Game& game, const Regions& regions);

/// Inclusion-minimal set of non-terminal moves leaving escape positions whose
/// removal makes the graph without cycle_bound acyclic. Starts from all such
/// moves and restores them one at a time in name order while acyclicity holds.
std::vector<std::pair<int, int>> minimal_feedback_arcs(const Game& game,
                                                       const Regions& regions);

/// Terminal equilibrium for an acyclic start region: backward induction on
/// the game without cycle_bound and the feedback moves, then every position
/// that can reach the resulting outcome is routed to it along an in-tree
/// containing the induced play; cycle_bound positions keep the play out by
/// moving among themselves.
Situation terminal_ne_construct(const Game& game, const Regions& regions,
                                const std::vector<std::pair<int, int>>& feedback);

/// End-to-end solve for play-once games. The result always passes check_ne.
Situation solve_play_once(const Game& game);

}  // namespace dgg
