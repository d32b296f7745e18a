#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Core model for finite n-person deterministic graphical (DG) games:
// a finite digraph whose sinks are terminal outcomes, one controller per
// non-terminal position, strict preference orders over terminals plus the
// single infinite outcome, and pure stationary strategies.

namespace dgg {

/// Input or precondition violation. Message names the offending entity.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when an operation requires an acyclic graph; carries a witness cycle.
class CycleError : public ValidationError {
 public:
  CycleError(const std::string& msg, std::vector<int> cycle)
      : ValidationError(msg), cycle(std::move(cycle)) {}
  std::vector<int> cycle;  // position ids forming a directed cycle
};

/// Instance exceeds the enumeration index width.
class TooLargeError : public ValidationError {
 public:
  explicit TooLargeError(const std::string& msg) : ValidationError(msg) {}
};

/// A play outcome: either a terminal position or the one infinite outcome.
struct Outcome {
  int terminal = -1;  // position id, or -1 for the infinite outcome

  static Outcome infinite() { return Outcome{}; }
  static Outcome at(int terminal_pos) { return Outcome{terminal_pos}; }
  bool is_terminal() const { return terminal >= 0; }
  bool operator==(const Outcome&) const = default;
};

/// Raw game description. Position/terminal/player references are by name and
/// 1-based player index; Game::build validates and canonicalizes it.
struct GameDef {
  int players = 0;
  std::vector<std::string> terminals;
  std::vector<std::pair<std::string, int>> internals;  // (name, controller)
  std::string init;
  std::vector<std::pair<std::string, std::string>> moves;
  // One entry per player, best outcome first; "inf" names the infinite outcome.
  std::vector<std::vector<std::string>> prefs;
};

// Immutable, validated game. Positions are identified by dense ids assigned
// in name order, so id order and name order coincide everywhere; adjacency
// lists are sorted, which fixes the deterministic enumeration order used by
// the oracle and the solvers.
class Game {
 public:
  static Game build(const GameDef& def);  // throws ValidationError

  int player_count() const { return players_; }
  int position_count() const { return static_cast<int>(names_.size()); }
  int internal_count() const { return static_cast<int>(internals_.size()); }
  int terminal_count() const { return static_cast<int>(terminals_.size()); }
  int init_position() const { return init_; }

  bool is_terminal(int pos) const { return controller_[pos] == 0; }
  /// 1-based controlling player; positions only, never call on a terminal.
  int controller(int pos) const { return controller_[pos]; }
  const std::string& name(int pos) const { return names_[pos]; }
  /// Id for a name, or -1 if unknown.
  int position(const std::string& name) const;

  const std::vector<int>& successors(int pos) const { return succ_[pos]; }
  bool has_move(int from, int to) const;
  int move_count() const { return move_count_; }

  const std::vector<int>& internals() const { return internals_; }
  const std::vector<int>& terminals() const { return terminals_; }
  const std::vector<int>& positions_of(int player) const {
    return by_player_[player - 1];
  }

  /// True if `player` strictly prefers outcome a to outcome b.
  bool prefers(int player, Outcome a, Outcome b) const {
    return rank(player, a) < rank(player, b);
  }
  /// Preference rank, 1 = best.
  int rank(int player, Outcome o) const;
  /// Rank of a terminal among the player's terminals only, 1 = best.
  int terminal_rank(int player, int terminal_pos) const;
  /// The player's most preferred terminal out of a non-empty list.
  int best_terminal(int player, const std::vector<int>& terminal_pos) const;

  bool operator==(const Game&) const = default;

  GameDef to_def() const;

 private:
  Game() = default;

  int players_ = 0;
  int init_ = -1;
  int move_count_ = 0;
  std::vector<std::string> names_;     // indexed by position id, sorted
  std::vector<int> controller_;        // 0 for terminals, else 1-based player
  std::vector<std::vector<int>> succ_; // sorted target ids
  std::vector<int> internals_;         // ids in name order
  std::vector<int> terminals_;
  std::vector<std::vector<int>> by_player_;
  // prefs_[p][rank-1] = outcome encoded as terminal id, or -1 for infinite
  std::vector<std::vector<int>> prefs_;
  std::vector<std::vector<int>> rank_;  // rank_[p] indexed by terminal id; last slot = infinite
};

/// One chosen move per non-terminal position.
struct Situation {
  std::vector<int> choice;  // indexed by position id; chosen target, -1 on terminals

  bool operator==(const Situation&) const = default;
};

/// Throws ValidationError naming the first position with a missing or
/// foreign choice.
void validate_situation(const Game& game, const Situation& sit);

/// The unique walk induced by a situation from a start position. When the
/// walk revisits a position it is cut there: the repeated position appears
/// twice and cycle_start is the index of its first occurrence.
struct Play {
  std::vector<int> walk;
  Outcome outcome;
  std::optional<int> cycle_start;
};

Play evaluate(const Game& game, const Situation& sit, int start);
Play evaluate(const Game& game, const Situation& sit);  // from the initial position

struct Deviation {
  int player = 0;
  Situation situation;  // differs from the checked situation only on the player's positions
  Outcome outcome;
};

struct NeVerdict {
  bool is_ne = false;
  std::optional<Deviation> witness;  // present iff not is_ne
};

/// Exhaustive Nash check: every player, every alternative strategy. The
/// witness, when present, is the first improvement found scanning players in
/// ascending order and strategies in mixed-radix order (positions by name,
/// moves by target name).
NeVerdict check_ne(const Game& game, const Situation& sit);

/// Best outcome the player can reach by changing only their own choices,
/// with one situation achieving it (the first in enumeration order).
std::pair<Outcome, Situation> best_response(const Game& game, const Situation& sit,
                                            int player);

struct BackwardInductionResult {
  Situation situation;
  std::vector<Outcome> value;  // indexed by position id
};

/// Value propagation in reverse topological order; requires an acyclic game
/// (throws CycleError with a witness otherwise). Among successors sharing the
/// best value the lowest-named one is chosen.
BackwardInductionResult backward_induction(const Game& game);

/// Positions reachable from `from` by directed paths staying inside
/// `allowed` (the empty path counts, so `from` is always included).
/// `allowed` and the result are sorted id lists.
std::vector<int> reachable(const Game& game, int from, const std::vector<int>& allowed);

struct GameClass {
  bool terminal_game = false;        // every player ranks the infinite outcome last
  bool play_once = false;            // every player controls exactly one position
  bool terminal_reachable = false;   // some terminal reachable from the initial position
};

GameClass classify(const Game& game);

}  // namespace dgg
