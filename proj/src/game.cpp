#include "dgg/game.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace dgg {

namespace {

// Mixed-radix odometer over one player's positions: positions_ids must be in
// name (= id) order; digit k indexes the sorted successor list of position k.
// The first position is the most significant digit.
struct StrategyOdometer {
  const Game& game;
  const std::vector<int>& positions;
  std::vector<int> digit;
  bool done = false;

  StrategyOdometer(const Game& g, const std::vector<int>& ps)
      : game(g), positions(ps), digit(ps.size(), 0) {}

  void apply(Situation& sit) const {
    for (size_t k = 0; k < positions.size(); ++k)
      sit.choice[positions[k]] = game.successors(positions[k])[digit[k]];
  }

  void advance() {
    for (int k = static_cast<int>(positions.size()) - 1; k >= 0; --k) {
      int radix = static_cast<int>(game.successors(positions[k]).size());
      if (++digit[k] < radix) return;
      digit[k] = 0;
    }
    done = true;
  }
};

}  // namespace

Game Game::build(const GameDef& def) {
  if (def.players < 1) throw ValidationError("player count must be at least 1");

  std::map<std::string, int> controller_of;  // 0 = terminal
  for (const auto& t : def.terminals) {
    if (t == "inf") throw ValidationError("'inf' is reserved and cannot name a position");
    if (!controller_of.emplace(t, 0).second)
      throw ValidationError("duplicate position " + t);
  }
  for (const auto& [name, player] : def.internals) {
    if (name == "inf") throw ValidationError("'inf' is reserved and cannot name a position");
    if (player < 1 || player > def.players)
      throw ValidationError("unknown controller " + std::to_string(player) +
                            " for position " + name);
    if (!controller_of.emplace(name, player).second)
      throw ValidationError("duplicate position " + name);
  }

  Game g;
  g.players_ = def.players;
  for (const auto& [name, _] : controller_of) g.names_.push_back(name);
  auto id_of = [&](const std::string& name) {
    auto it = std::lower_bound(g.names_.begin(), g.names_.end(), name);
    if (it == g.names_.end() || *it != name) return -1;
    return static_cast<int>(it - g.names_.begin());
  };

  int n = g.position_count();
  g.controller_.resize(n);
  g.succ_.resize(n);
  g.by_player_.resize(def.players);
  for (const auto& [name, player] : controller_of) {
    int id = id_of(name);
    g.controller_[id] = player;
    if (player == 0)
      g.terminals_.push_back(id);
    else
      g.internals_.push_back(id);
  }
  for (int id : g.internals_) g.by_player_[g.controller_[id] - 1].push_back(id);

  std::set<std::pair<int, int>> seen;
  for (const auto& [from, to] : def.moves) {
    int f = id_of(from), t = id_of(to);
    if (f < 0) throw ValidationError("unknown position " + from + " in move");
    if (t < 0) throw ValidationError("unknown position " + to + " in move");
    if (g.controller_[f] == 0)
      throw ValidationError("move from terminal " + from);
    if (!seen.emplace(f, t).second)
      throw ValidationError("duplicate move " + from + " " + to);
    g.succ_[f].push_back(t);
  }
  g.move_count_ = static_cast<int>(seen.size());
  for (int id : g.internals_) {
    auto& s = g.succ_[id];
    std::sort(s.begin(), s.end());
    if (s.empty())
      throw ValidationError("position " + g.names_[id] + " has no moves");
  }

  if (def.init.empty()) throw ValidationError("missing init position");
  g.init_ = id_of(def.init);
  if (g.init_ < 0) throw ValidationError("unknown init position " + def.init);
  if (g.controller_[g.init_] == 0)
    throw ValidationError("init position " + def.init + " is a terminal");

  if (static_cast<int>(def.prefs.size()) != def.players)
    throw ValidationError("expected preference lists for " +
                          std::to_string(def.players) + " players, got " +
                          std::to_string(def.prefs.size()));
  int outcomes = g.terminal_count() + 1;
  g.prefs_.resize(def.players);
  g.rank_.assign(def.players, std::vector<int>(n + 1, 0));
  for (int p = 0; p < def.players; ++p) {
    std::vector<int> seen_outcome(n + 1, 0);  // slot n = infinite
    for (const auto& oname : def.prefs[p]) {
      int o;
      if (oname == "inf") {
        o = -1;
      } else {
        o = id_of(oname);
        if (o < 0 || g.controller_[o] != 0)
          throw ValidationError("pref for player " + std::to_string(p + 1) +
                                " names unknown terminal " + oname);
      }
      int slot = o < 0 ? n : o;
      if (seen_outcome[slot]++)
        throw ValidationError("preference tie: pref for player " +
                              std::to_string(p + 1) + " repeats outcome " + oname);
      g.prefs_[p].push_back(o);
      g.rank_[p][slot] = static_cast<int>(g.prefs_[p].size());
    }
    if (static_cast<int>(g.prefs_[p].size()) != outcomes) {
      for (int t : g.terminals_)
        if (!seen_outcome[t])
          throw ValidationError("pref for player " + std::to_string(p + 1) +
                                " missing outcome " + g.names_[t]);
      throw ValidationError("pref for player " + std::to_string(p + 1) +
                            " missing outcome inf");
    }
  }
  return g;
}

int Game::position(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return -1;
  return static_cast<int>(it - names_.begin());
}

bool Game::has_move(int from, int to) const {
  const auto& s = succ_[from];
  return std::binary_search(s.begin(), s.end(), to);
}

int Game::rank(int player, Outcome o) const {
  int slot = o.is_terminal() ? o.terminal : position_count();
  int r = rank_[player - 1][slot];
  assert(r > 0);
  return r;
}

int Game::terminal_rank(int player, int terminal_pos) const {
  int r = 0;
  for (int t : terminals_) {
    if (rank(player, Outcome::at(t)) <= rank(player, Outcome::at(terminal_pos))) ++r;
  }
  return r;
}

int Game::best_terminal(int player, const std::vector<int>& terminal_pos) const {
  assert(!terminal_pos.empty());
  int best = terminal_pos.front();
  for (int t : terminal_pos)
    if (prefers(player, Outcome::at(t), Outcome::at(best))) best = t;
  return best;
}

GameDef Game::to_def() const {
  GameDef def;
  def.players = players_;
  for (int t : terminals_) def.terminals.push_back(names_[t]);
  for (int v : internals_) def.internals.emplace_back(names_[v], controller_[v]);
  def.init = names_[init_];
  for (int v : internals_)
    for (int t : succ_[v]) def.moves.emplace_back(names_[v], names_[t]);
  for (const auto& pref : prefs_) {
    std::vector<std::string> row;
    for (int o : pref) row.push_back(o < 0 ? "inf" : names_[o]);
    def.prefs.push_back(std::move(row));
  }
  return def;
}

void validate_situation(const Game& game, const Situation& sit) {
  if (sit.choice.size() != static_cast<size_t>(game.position_count()))
    throw ValidationError("situation covers " + std::to_string(sit.choice.size()) +
                          " positions, game has " +
                          std::to_string(game.position_count()));
  for (int v : game.internals()) {
    int to = sit.choice[v];
    if (to < 0)
      throw ValidationError("situation missing a choice at position " + game.name(v));
    if (!game.has_move(v, to))
      throw ValidationError("situation chooses a non-move at position " + game.name(v));
  }
}

Play evaluate(const Game& game, const Situation& sit, int start) {
  validate_situation(game, sit);
  Play play;
  std::vector<int> visited_at(game.position_count(), -1);
  int v = start;
  for (;;) {
    if (visited_at[v] >= 0) {
      play.walk.push_back(v);
      play.outcome = Outcome::infinite();
      play.cycle_start = visited_at[v];
      return play;
    }
    visited_at[v] = static_cast<int>(play.walk.size());
    play.walk.push_back(v);
    if (game.is_terminal(v)) {
      play.outcome = Outcome::at(v);
      return play;
    }
    v = sit.choice[v];
  }
}

Play evaluate(const Game& game, const Situation& sit) {
  return evaluate(game, sit, game.init_position());
}

NeVerdict check_ne(const Game& game, const Situation& sit) {
  Outcome base = evaluate(game, sit).outcome;
  for (int p = 1; p <= game.player_count(); ++p) {
    const auto& mine = game.positions_of(p);
    if (mine.empty()) continue;
    Situation alt = sit;
    for (StrategyOdometer od(game, mine); !od.done; od.advance()) {
      od.apply(alt);
      Outcome got = evaluate(game, alt).outcome;
      if (game.prefers(p, got, base))
        return NeVerdict{false, Deviation{p, alt, got}};
    }
  }
  return NeVerdict{true, std::nullopt};
}

std::pair<Outcome, Situation> best_response(const Game& game, const Situation& sit,
                                            int player) {
  Outcome base = evaluate(game, sit).outcome;
  Outcome best = base;
  Situation best_sit = sit;
  const auto& mine = game.positions_of(player);
  if (mine.empty()) return {best, best_sit};
  Situation alt = sit;
  for (StrategyOdometer od(game, mine); !od.done; od.advance()) {
    od.apply(alt);
    Outcome got = evaluate(game, alt).outcome;
    if (game.prefers(player, got, best)) {
      best = got;
      best_sit = alt;
    }
  }
  return {best, best_sit};
}

BackwardInductionResult backward_induction(const Game& game) {
  int n = game.position_count();
  // Kahn's algorithm; whatever remains when the queue dries up lies on cycles.
  std::vector<int> outdeg(n, 0);
  std::vector<std::vector<int>> preds(n);
  for (int v : game.internals()) {
    outdeg[v] = static_cast<int>(game.successors(v).size());
    for (int w : game.successors(v)) preds[w].push_back(v);
  }
  std::vector<int> order;  // positions whose successors are all resolved
  for (int t : game.terminals()) order.push_back(t);
  for (size_t i = 0; i < order.size(); ++i) {
    for (int u : preds[order[i]])
      if (--outdeg[u] == 0) order.push_back(u);
  }
  if (static_cast<int>(order.size()) != n) {
    std::vector<bool> resolved(n, false);
    for (int v : order) resolved[v] = true;
    int v = 0;
    while (resolved[v]) ++v;
    // walk within unresolved positions until one repeats
    std::vector<int> path;
    std::vector<int> at(n, -1);
    while (at[v] < 0) {
      at[v] = static_cast<int>(path.size());
      path.push_back(v);
      for (int w : game.successors(v))
        if (!resolved[w]) {
          v = w;
          break;
        }
    }
    std::vector<int> cycle(path.begin() + at[v], path.end());
    std::string msg = "graph not acyclic:";
    for (int c : cycle) msg += " " + game.name(c);
    throw CycleError(msg, cycle);
  }

  BackwardInductionResult res;
  res.situation.choice.assign(n, -1);
  res.value.assign(n, Outcome::infinite());
  for (int v : order) {
    if (game.is_terminal(v)) {
      res.value[v] = Outcome::at(v);
      continue;
    }
    int player = game.controller(v);
    int pick = -1;
    for (int w : game.successors(v)) {
      if (pick < 0 || game.prefers(player, res.value[w], res.value[pick])) pick = w;
      // equal values keep the earlier (lower-named) successor
    }
    res.situation.choice[v] = pick;
    res.value[v] = res.value[pick];
  }
  return res;
}

std::vector<int> reachable(const Game& game, int from, const std::vector<int>& allowed) {
  if (!std::binary_search(allowed.begin(), allowed.end(), from))
    throw ValidationError("reachability start " + game.name(from) +
                          " is outside the allowed set");
  std::vector<bool> in(game.position_count(), false), hit(game.position_count(), false);
  for (int v : allowed) in[v] = true;
  std::vector<int> queue{from};
  hit[from] = true;
  for (size_t i = 0; i < queue.size(); ++i) {
    int v = queue[i];
    if (game.is_terminal(v)) continue;
    for (int w : game.successors(v))
      if (in[w] && !hit[w]) {
        hit[w] = true;
        queue.push_back(w);
      }
  }
  std::vector<int> out;
  for (int v = 0; v < game.position_count(); ++v)
    if (hit[v]) out.push_back(v);
  return out;
}

GameClass classify(const Game& game) {
  GameClass cls;
  cls.terminal_game = true;
  for (int p = 1; p <= game.player_count(); ++p)
    if (game.rank(p, Outcome::infinite()) != game.terminal_count() + 1)
      cls.terminal_game = false;
  cls.play_once = game.player_count() == game.internal_count();
  for (int p = 1; p <= game.player_count() && cls.play_once; ++p)
    if (game.positions_of(p).size() != 1) cls.play_once = false;
  std::vector<int> all(game.position_count());
  for (int v = 0; v < game.position_count(); ++v) all[v] = v;
  cls.terminal_reachable = false;
  for (int v : reachable(game, game.init_position(), all))
    if (game.is_terminal(v)) cls.terminal_reachable = true;
  return cls;
}

}  // namespace dgg
