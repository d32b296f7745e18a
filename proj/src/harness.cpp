#include "dgg/harness.hpp"

#include <algorithm>
#include <random>

namespace dgg {

namespace {

// All randomness below uses raw mt19937_64 draws (modulo for bounds, explicit
// Fisher-Yates for shuffles) so that a seed pins the result on any platform.

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

template <typename T>
void shuffle_vec(std::mt19937_64& rng, std::vector<T>& v) {
  for (size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[draw(rng, i)]);
}

std::string padded(const std::string& prefix, int k) {
  return prefix + (k < 10 ? "0" : "") + std::to_string(k);
}

void check_common(const GenParams& p) {
  if (p.positions < 1 || p.players < 1 || p.terminals < 0 || p.max_out_degree < 1)
    throw ValidationError("generator parameters out of range");
  if (p.force_play_once && p.players != p.positions)
    throw ValidationError("play-once generation needs players == positions");
  if (p.force_terminal_reachable && p.terminals == 0)
    throw ValidationError("cannot force terminal reachability with no terminals");
}

GameDef skeleton(const GenParams& p, std::mt19937_64& rng) {
  GameDef def;
  def.players = p.players;
  for (int k = 1; k <= p.terminals; ++k) def.terminals.push_back(padded("t", k));
  for (int k = 1; k <= p.positions; ++k) {
    int player = p.force_play_once ? k : 1 + static_cast<int>(draw(rng, p.players));
    def.internals.emplace_back(padded("p", k), player);
  }
  def.init = "p01";
  for (int player = 1; player <= p.players; ++player) {
    std::vector<std::string> row = def.terminals;
    if (p.force_terminal_game) {
      shuffle_vec(rng, row);
      row.push_back("inf");
    } else {
      row.push_back("inf");
      shuffle_vec(rng, row);
    }
    def.prefs.push_back(std::move(row));
  }
  return def;
}

void roll_moves(const GenParams& p, std::mt19937_64& rng, GameDef& def) {
  def.moves.clear();
  for (const auto& [name, _] : def.internals) {
    std::vector<std::string> targets;
    for (const auto& t : def.terminals) targets.push_back(t);
    for (const auto& [other, _2] : def.internals)
      if (other != name) targets.push_back(other);
    int degree = 1 + static_cast<int>(
                         draw(rng, std::min<std::uint64_t>(p.max_out_degree,
                                                           targets.size())));
    for (int k = 0; k < degree; ++k) {
      size_t pick = k + draw(rng, targets.size() - k);
      std::swap(targets[k], targets[pick]);
      def.moves.emplace_back(name, targets[k]);
    }
  }
}

}  // namespace

Game fixture(const std::string& name) {
  GameDef def;
  def.players = 3;
  def.terminals = {"a", "b", "c"};
  if (name == "fig1") {
    def.internals = {{"p1", 1}, {"p2", 2}, {"p3", 2}, {"p4", 3}};
    def.init = "p1";
    def.moves = {{"p1", "p2"}, {"p1", "p4"}, {"p2", "a"}, {"p2", "p3"},
                 {"p3", "b"}, {"p3", "p4"}, {"p4", "p3"}, {"p4", "c"}};
    def.prefs = {{"b", "inf", "a", "c"}, {"c", "a", "b", "inf"}, {"a", "inf", "c", "b"}};
    return Game::build(def);
  }
  if (name == "fig2" || name == "fig2-terminal") {
    def.internals = {{"q1", 1}, {"q2", 2}, {"q3", 3}};
    def.init = "q1";
    def.moves = {{"q1", "q2"}, {"q1", "a"}, {"q2", "q3"},
                 {"q2", "b"}, {"q3", "q1"}, {"q3", "c"}};
    if (name == "fig2")
      def.prefs = {{"b", "c", "inf", "a"}, {"c", "a", "inf", "b"}, {"a", "b", "inf", "c"}};
    else
      def.prefs = {{"b", "c", "a", "inf"}, {"c", "a", "b", "inf"}, {"a", "b", "c", "inf"}};
    return Game::build(def);
  }
  throw ValidationError("unknown fixture " + name);
}

Game random_game(const GenParams& p) {
  check_common(p);
  std::mt19937_64 rng(p.seed);
  GameDef def = skeleton(p, rng);
  const int attempts = 1000;
  for (int round = 0; round < attempts; ++round) {
    roll_moves(p, rng, def);
    Game game = Game::build(def);
    if (!p.force_terminal_reachable || classify(game).terminal_reachable) return game;
  }
  throw ValidationError("could not satisfy terminal reachability for seed " +
                        std::to_string(p.seed));
}

Game random_acyclic_game(const GenParams& p) {
  check_common(p);
  if (p.terminals == 0)
    throw ValidationError("acyclic generation needs at least one terminal");
  std::mt19937_64 rng(p.seed);
  GameDef def = skeleton(p, rng);
  def.moves.clear();
  for (int k = 1; k <= p.positions; ++k) {
    // later positions and terminals only, so the graph is a dag by layout
    std::vector<std::string> targets;
    for (const auto& t : def.terminals) targets.push_back(t);
    for (int j = k + 1; j <= p.positions; ++j) targets.push_back(padded("p", j));
    int degree = 1 + static_cast<int>(
                         draw(rng, std::min<std::uint64_t>(p.max_out_degree,
                                                           targets.size())));
    for (int i = 0; i < degree; ++i) {
      size_t pick = i + draw(rng, targets.size() - i);
      std::swap(targets[i], targets[pick]);
      def.moves.emplace_back(padded("p", k), targets[i]);
    }
  }
  return Game::build(def);
}

Game random_terminal_unreachable_game(const GenParams& p) {
  GenParams q = p;
  q.force_terminal_game = true;
  q.force_terminal_reachable = false;
  check_common(q);
  if (q.terminals < 1 || q.positions < 2)
    throw ValidationError("unreachable-terminal generation needs >= 2 positions and a terminal");
  std::mt19937_64 rng(q.seed);
  GameDef def = skeleton(q, rng);
  def.moves.clear();
  // first half traps the initial position, second half feeds the terminals
  int trapped = 1 + static_cast<int>(draw(rng, q.positions - 1));
  for (int k = 1; k <= q.positions; ++k) {
    std::vector<std::string> targets;
    if (k <= trapped) {
      for (int j = 1; j <= trapped; ++j)
        if (j != k) targets.push_back(padded("p", j));
      if (targets.empty()) targets.push_back(padded("p", k));  // self-loop trap
    } else {
      for (const auto& t : def.terminals) targets.push_back(t);
      for (int j = trapped + 1; j <= q.positions; ++j)
        if (j != k) targets.push_back(padded("p", j));
    }
    int degree = 1 + static_cast<int>(
                         draw(rng, std::min<std::uint64_t>(q.max_out_degree,
                                                           targets.size())));
    for (int i = 0; i < degree; ++i) {
      size_t pick = i + draw(rng, targets.size() - i);
      std::swap(targets[i], targets[pick]);
      def.moves.emplace_back(padded("p", k), targets[i]);
    }
  }
  return Game::build(def);
}

std::vector<SearchHit> search_ne_free(const GenParams& params, std::uint64_t trials,
                                      const SearchProgress& progress) {
  std::vector<SearchHit> hits;
  for (std::uint64_t k = 0; k < trials; ++k) {
    GenParams p = params;
    p.seed = params.seed + k;
    Certificate cert = certify(random_game(p), false);
    if (cert.tag == Certificate::Tag::NeFree)
      hits.push_back(SearchHit{p.seed, std::move(cert)});
    if (progress && ((k + 1) % 100 == 0 || k + 1 == trials)) progress(k + 1, trials);
  }
  return hits;
}

}  // namespace dgg
