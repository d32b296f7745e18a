#pragma once

#include <string>

#include "dgg/game.hpp"

// Text formats.
//
// Game files are line based:
//
//   players N
//   terminal IDENT...
//   position IDENT controller=K
//   init IDENT
//   move IDENT IDENT
//   pref K: O1 > O2 > ... > Om
//
// IDENT is a letter or underscore followed by letters, digits or
// underscores; `inf` is reserved for the infinite outcome in pref lines.
// `#` starts a comment, blank lines are ignored, order of sections is free.
//
// Situation files hold one line `FROM -> TO` per non-terminal position.

namespace dgg {

class ParseError : public ValidationError {
 public:
  ParseError(int line, const std::string& msg)
      : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line(line) {}
  int line;  // 1-based, 0 when no single line is at fault
};

Game parse_game(const std::string& text);

/// Canonical form: players, terminals, positions, init, moves, prefs, each
/// sorted by name. parse_game(print_game(g)) reproduces g exactly.
std::string print_game(const Game& game);

Situation parse_situation(const Game& game, const std::string& text);

std::string print_situation(const Game& game, const Situation& sit);

/// Same choices on one line, `from->to` pairs separated by spaces.
std::string print_situation_line(const Game& game, const Situation& sit);

/// Graphviz export: terminals as boxes, internal positions labelled
/// name/controller, the situation's arcs (when given) in bold.
std::string export_dot(const Game& game, const Situation* sit);

}  // namespace dgg
