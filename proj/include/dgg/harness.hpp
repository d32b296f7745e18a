#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dgg/game.hpp"
#include "dgg/oracle.hpp"

namespace dgg {

/// Built-in example games: "fig1" (a 4-position, 3-player game with no
/// equilibrium at all), "fig2" (3 players in a cycle; its only equilibrium is
/// the non-terminal 3-cycle) and "fig2-terminal" (same graph with preferences
/// that rank every terminal above the infinite outcome).
Game fixture(const std::string& name);

struct GenParams {
  int positions = 6;       // non-terminal positions
  int terminals = 3;
  int players = 3;
  int max_out_degree = 3;
  bool force_play_once = false;          // requires players == positions
  bool force_terminal_game = false;      // pins the infinite outcome last
  bool force_terminal_reachable = false; // rejection-samples the move sets
  std::uint64_t seed = 1;
};

/// Seeded, reproducible random game: same params give the same game on every
/// run. Out-neighborhoods are drawn without replacement from the other
/// positions; preferences are uniformly random permutations.
Game random_game(const GenParams& params);

/// Random acyclic game: moves only go from lower- to higher-numbered
/// positions or to terminals, so backward induction always applies.
Game random_acyclic_game(const GenParams& params);

/// Random terminal game whose initial position sits in a component with no
/// path to any terminal (self-loops keep the trapped part total).
Game random_terminal_unreachable_game(const GenParams& params);

struct SearchHit {
  std::uint64_t seed = 0;
  Certificate certificate;
};

using SearchProgress = std::function<void(std::uint64_t done, std::uint64_t total)>;

/// Certifies `trials` games generated from params.seed, params.seed + 1, ...
/// and reports the equilibrium-free ones. Progress fires every 100 trials.
std::vector<SearchHit> search_ne_free(const GenParams& params, std::uint64_t trials,
                                      const SearchProgress& progress = nullptr);

}  // namespace dgg
