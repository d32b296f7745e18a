#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgg/game.hpp"

// Constructive equilibrium search for terminal games (every player prefers
// every terminal to endless play) with at most three terminals, built as a
// recursive chain of game reductions with equilibrium lifting, plus direct
// constructions for two special shapes: terminals cut off from the initial
// position, and terminal play-once games.

namespace dgg {

/// The exhaustive fallback certified that no equilibrium exists. Possible
/// only for inputs outside the guaranteed class (terminal game, at most
/// three terminals).
class NoEquilibriumError : public ValidationError {
 public:
  explicit NoEquilibriumError(const std::string& msg) : ValidationError(msg) {}
};

/// Non-terminal equilibrium when no terminal is reachable from the initial
/// position: every reachable position moves within the reachable set (all
/// such moves are non-terminal), so no deviation can ever terminate. Valid
/// for any preferences. Throws ValidationError if a terminal is reachable.
Situation solve_unreachable(const Game& game);

/// Terminal play-once games with a reachable terminal: rewrite so every
/// position keeps at most one terminal move, run the play down a minimum-arc
/// path to a terminal, and give each off-path position a non-terminal move.
/// The result is verified with check_ne before returning.
Situation solve_terminal_play_once(const Game& game);

/// One game rewrite. Kinds, in scan order:
///   RemoveDead          drop every position that cannot reach a terminal
///   ContractDummy       splice out a single-move position (internal target)
///   AbsorbTerminalDummy merge a single-move position into its terminal
///   ForcedTerminal      all moves terminal: keep the controller's best only
///   TopTerminal         a move to the controller's best terminal: keep only it
///   WorstTerminal       delete a move to the controller's worst terminal
///   PinSecondBest       fixpoint step: delete the non-terminal moves of the
///                       owner of the chosen second-best terminal move
struct ReductionStep {
  enum class Kind {
    RemoveDead,
    ContractDummy,
    AbsorbTerminalDummy,
    ForcedTerminal,
    TopTerminal,
    WorstTerminal,
    PinSecondBest,
  };
  Kind kind;
  std::vector<std::string> removed;  // RemoveDead only
  std::string pos, target;           // rewritten position and its key target
  // ContractDummy / AbsorbTerminalDummy: predecessors whose arc to pos was
  // replaced by a fresh arc (pre-existing parallel arcs are not listed).
  std::vector<std::string> redirected;
  std::vector<std::pair<std::string, std::string>> deleted;  // dropped moves
};

struct AppliedReduction {
  Game game;
  ReductionStep step;
};

/// Outcome of scanning for the first applicable structural reduction
/// (PinSecondBest excluded). `bottleneck` reports a worst-terminal move
/// whose deletion would cut the initial position off from the terminals;
/// such a move is the single entry into the terminals (see bottleneck_ne)
/// and stops the reduction chain. Neither field set means fixpoint.
/// Requires a terminal reachable from the initial position.
struct ScanResult {
  std::optional<AppliedReduction> applied;
  std::optional<std::pair<std::string, std::string>> bottleneck;
};

ScanResult next_reduction(const Game& game);

/// Pulls an equilibrium of the reduced game back through one step.
Situation lift_step(const Game& parent, const ReductionStep& step,
                    const Game& child, const Situation& sit);

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  std::vector<Game> games;  // games[k] = state after steps[k]
};

/// Chains next_reduction until no structural reduction applies.
ReductionTrace reduce_to_fixpoint(const Game& game);

/// Fixpoint law: every surviving move into a terminal goes to its
/// controller's second-best terminal.
bool all_terminal_moves_second_best(const Game& game);

/// Equilibrium when the move (u, c) is the only way from the initial
/// position into the terminals: route the play to u and take c. Any
/// deviated play still either ends at c or never terminates, so in a
/// terminal game nobody can improve.
Situation bottleneck_ne(const Game& game, const std::string& u,
                        const std::string& c);

/// Rewrites an equilibrium with terminal outcome a so that no position
/// chooses a move into a different terminal, keeping the play and outcome.
/// Preconditions: sigma is an equilibrium with a terminal outcome; no
/// position holds a move to its controller's best terminal; every position
/// choosing into a different terminal has a non-terminal alternative.
Situation switching_transform(const Game& game, const Situation& sigma);

struct SolveStats {
  int reductions = 0;        // structural reductions applied
  int pinned = 0;            // second-best pin steps
  int bottlenecks = 0;       // single-entry confinement solves
  int lift_failures = 0;     // lifted situation failed the equilibrium check
  int oracle_fallbacks = 0;  // levels solved by exhaustive scan instead
};

struct Terminal3Result {
  Situation situation;
  Outcome outcome;
  SolveStats stats;
};

/// Equilibrium for terminal games with at most three terminals; the outcome
/// is terminal whenever some terminal is reachable from the initial
/// position. Inputs outside that class go straight to the exhaustive scan.
/// Every lift is verified with check_ne and failures also fall back to the
/// scan, so a clean constructive run has lift_failures == 0 and
/// oracle_fallbacks == 0.
Terminal3Result solve_terminal3(const Game& game);

}  // namespace dgg
