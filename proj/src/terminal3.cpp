#include "dgg/terminal3.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dgg/oracle.hpp"
#include "dgg/play_once.hpp"

namespace dgg {

namespace {

// Positions from which some terminal can be reached.
std::vector<char> reaches_terminal(const Game& g) {
  std::vector<char> can(static_cast<std::size_t>(g.position_count()), 0);
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(g.position_count()));
  for (int v : g.internals())
    for (int w : g.successors(v)) preds[static_cast<std::size_t>(w)].push_back(v);
  std::deque<int> queue;
  for (int t : g.terminals()) {
    can[static_cast<std::size_t>(t)] = 1;
    queue.push_back(t);
  }
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int y : preds[static_cast<std::size_t>(x)])
      if (!can[static_cast<std::size_t>(y)]) {
        can[static_cast<std::size_t>(y)] = 1;
        queue.push_back(y);
      }
  }
  return can;
}

// Can the initial position still reach a terminal with one move removed?
// Pass (-1, -1) to skip nothing.
bool init_reaches_terminal_without(const Game& g, int skip_from, int skip_to) {
  std::vector<char> seen(static_cast<std::size_t>(g.position_count()), 0);
  std::deque<int> queue{g.init_position()};
  seen[static_cast<std::size_t>(g.init_position())] = 1;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    if (g.is_terminal(x)) return true;
    for (int w : g.successors(x)) {
      if (x == skip_from && w == skip_to) continue;
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  return false;
}

int best_terminal_succ(const Game& g, int v) {
  int best = -1;
  for (int w : g.successors(v)) {
    if (!g.is_terminal(w)) continue;
    if (best == -1 || g.prefers(g.controller(v), Outcome::at(w), Outcome::at(best)))
      best = w;
  }
  return best;
}

// The player's terminal of a given rank (1 = best), or -1 if out of range.
int terminal_of_rank(const Game& g, int player, int want) {
  for (int t : g.terminals())
    if (g.terminal_rank(player, t) == want) return t;
  return -1;
}

Situation lowest_moves(const Game& g) {
  Situation sit;
  sit.choice.assign(static_cast<std::size_t>(g.position_count()), -1);
  for (int v : g.internals()) sit.choice[v] = g.successors(v)[0];
  return sit;
}

}  // namespace

Situation solve_unreachable(const Game& game) {
  std::vector<int> all(static_cast<std::size_t>(game.position_count()));
  for (int v = 0; v < game.position_count(); ++v) all[static_cast<std::size_t>(v)] = v;
  std::vector<int> region = reachable(game, game.init_position(), all);
  for (int v : region)
    if (game.is_terminal(v))
      throw ValidationError("terminal " + game.name(v) +
                            " is reachable from the initial position");
  // The reachable set is closed under moves and terminal-free, so every
  // choice below keeps any play (deviated or not) inside it forever.
  Situation sit = lowest_moves(game);
  for (int v : region)
    if (game.is_terminal(sit.choice[v]))
      throw std::logic_error("reachable set leaks into a terminal");
  return sit;
}

Situation solve_terminal_play_once(const Game& game) {
  GameClass cls = classify(game);
  if (!cls.terminal_game)
    throw ValidationError("terminal play-once solver needs a terminal game");
  if (!cls.play_once)
    throw ValidationError("terminal play-once solver needs a play-once game");
  if (!cls.terminal_reachable)
    throw ValidationError("no terminal reachable from the initial position");

  Normalized norm = normalize_play_once(game);
  const Game& g = norm.game;

  Situation sit;
  if (norm.init_absorbed) {
    sit = lowest_moves(g);
  } else {
    // Minimum-arc path from the initial position to a terminal.
    std::vector<int> parent(static_cast<std::size_t>(g.position_count()), -1);
    std::vector<char> seen(static_cast<std::size_t>(g.position_count()), 0);
    std::deque<int> queue{g.init_position()};
    seen[static_cast<std::size_t>(g.init_position())] = 1;
    int goal = -1;
    while (!queue.empty() && goal == -1) {
      int x = queue.front();
      queue.pop_front();
      if (g.is_terminal(x)) {
        goal = x;
        break;
      }
      for (int w : g.successors(x))
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          parent[static_cast<std::size_t>(w)] = x;
          queue.push_back(w);
        }
    }
    if (goal == -1) throw std::logic_error("terminal lost during rewriting");
    std::vector<int> path{goal};
    while (path.back() != g.init_position())
      path.push_back(parent[static_cast<std::size_t>(path.back())]);
    std::reverse(path.begin(), path.end());

    // Minimality means no internal position before the path's last one can
    // hold any terminal move.
    for (std::size_t k = 0; k + 2 < path.size(); ++k)
      if (best_terminal_succ(g, path[k]) != -1)
        throw std::logic_error("shorter terminating path exists via " +
                               g.name(path[k]));

    sit.choice.assign(static_cast<std::size_t>(g.position_count()), -1);
    for (int v : g.internals()) {
      int pick = -1;
      for (int w : g.successors(v))
        if (!g.is_terminal(w)) {
          pick = w;
          break;
        }
      if (pick == -1)
        throw std::logic_error("position " + g.name(v) +
                               " lost its non-terminal moves");
      sit.choice[v] = pick;
    }
    for (std::size_t k = 0; k + 2 < path.size(); ++k)
      sit.choice[path[k]] = path[k + 1];
    int last = path[path.size() - 2];
    sit.choice[last] = best_terminal_succ(g, last);
    validate_situation(g, sit);
  }

  Situation lifted = lift_normalized(game, norm, sit);
  if (!check_ne(game, lifted).is_ne)
    throw std::logic_error("terminal play-once construction is not an equilibrium");
  return lifted;
}

ScanResult next_reduction(const Game& game) {
  if (!init_reaches_terminal_without(game, -1, -1))
    throw ValidationError("no terminal reachable from the initial position");

  ScanResult res;
  std::vector<char> can = reaches_terminal(game);

  // Positions that cannot reach any terminal go away as a block.
  std::vector<std::string> dead;
  for (int v : game.internals())
    if (!can[static_cast<std::size_t>(v)]) dead.push_back(game.name(v));
  if (!dead.empty()) {
    std::set<std::string> drop(dead.begin(), dead.end());
    GameDef def = game.to_def();
    std::erase_if(def.internals, [&](auto& e) { return drop.count(e.first) != 0; });
    std::erase_if(def.moves, [&](auto& m) {
      return drop.count(m.first) != 0 || drop.count(m.second) != 0;
    });
    ReductionStep step;
    step.kind = ReductionStep::Kind::RemoveDead;
    step.removed = std::move(dead);
    res.applied = AppliedReduction{Game::build(def), std::move(step)};
    return res;
  }

  // Single-move positions are spliced out. A forced terminal move at the
  // initial position is the driver's trivial base case and is skipped here.
  for (int v : game.internals()) {
    if (game.successors(v).size() != 1) continue;
    int w = game.successors(v)[0];
    if (w == v) continue;  // unreachable: a pure self-loop cannot reach a terminal
    std::string vname = game.name(v), wname = game.name(w);
    if (!game.is_terminal(w)) {
      // v's forced move really belongs to w's controller: v takes over w's
      // moves and controller; arcs into w now enter v; (w, v) would become
      // a self-loop (v, v).
      GameDef def = game.to_def();
      std::erase_if(def.internals, [&](auto& e) { return e.first == wname; });
      for (auto& e : def.internals)
        if (e.first == vname) e.second = game.controller(w);
      if (def.init == wname) def.init = vname;
      std::set<std::pair<std::string, std::string>> have(def.moves.begin(),
                                                         def.moves.end());
      std::vector<std::string> redirected;
      std::vector<std::pair<std::string, std::string>> moves;
      for (auto& m : def.moves) {
        if (m.first == vname) continue;  // the forced (v, w) move
        if (m.first == wname) {
          std::string to = (m.second == wname || m.second == vname) ? vname : m.second;
          if (have.count({vname, to})) continue;
          have.insert({vname, to});
          moves.emplace_back(vname, to);
        } else if (m.second == wname) {
          if (have.count({m.first, vname})) continue;
          have.insert({m.first, vname});
          redirected.push_back(m.first);
          moves.emplace_back(m.first, vname);
        } else {
          moves.push_back(m);
        }
      }
      def.moves = std::move(moves);
      ReductionStep step;
      step.kind = ReductionStep::Kind::ContractDummy;
      step.pos = vname;
      step.target = wname;
      step.redirected = std::move(redirected);
      res.applied = AppliedReduction{Game::build(def), std::move(step)};
      return res;
    }
    if (v == game.init_position()) continue;
    // Forced terminal move elsewhere: the position collapses into its terminal.
    GameDef def = game.to_def();
    std::erase_if(def.internals, [&](auto& e) { return e.first == vname; });
    std::set<std::pair<std::string, std::string>> have(def.moves.begin(),
                                                       def.moves.end());
    std::vector<std::string> redirected;
    std::vector<std::pair<std::string, std::string>> moves;
    for (auto& m : def.moves) {
      if (m.first == vname) continue;
      if (m.second == vname) {
        if (have.count({m.first, wname})) continue;
        have.insert({m.first, wname});
        redirected.push_back(m.first);
        moves.emplace_back(m.first, wname);
      } else {
        moves.push_back(m);
      }
    }
    def.moves = std::move(moves);
    ReductionStep step;
    step.kind = ReductionStep::Kind::AbsorbTerminalDummy;
    step.pos = vname;
    step.target = wname;
    step.redirected = std::move(redirected);
    res.applied = AppliedReduction{Game::build(def), std::move(step)};
    return res;
  }

  // All moves terminal: only the controller's best survives.
  for (int v : game.internals()) {
    bool all_term = true;
    for (int w : game.successors(v)) all_term = all_term && game.is_terminal(w);
    if (!all_term || game.successors(v).size() < 2) continue;
    int keep = best_terminal_succ(game, v);
    ReductionStep step;
    step.kind = ReductionStep::Kind::ForcedTerminal;
    step.pos = game.name(v);
    step.target = game.name(keep);
    GameDef def = game.to_def();
    std::erase_if(def.moves, [&](auto& m) {
      if (m.first != step.pos || m.second == step.target) return false;
      step.deleted.push_back(m);
      return true;
    });
    res.applied = AppliedReduction{Game::build(def), std::move(step)};
    return res;
  }

  // A move to the controller's best terminal dominates: keep only it.
  for (int u : game.internals()) {
    int a = terminal_of_rank(game, game.controller(u), 1);
    if (a == -1 || !game.has_move(u, a) || game.successors(u).size() < 2) continue;
    ReductionStep step;
    step.kind = ReductionStep::Kind::TopTerminal;
    step.pos = game.name(u);
    step.target = game.name(a);
    GameDef def = game.to_def();
    std::erase_if(def.moves, [&](auto& m) {
      if (m.first != step.pos || m.second == step.target) return false;
      step.deleted.push_back(m);
      return true;
    });
    res.applied = AppliedReduction{Game::build(def), std::move(step)};
    return res;
  }

  // A move to the controller's worst terminal is never taken in a terminal
  // equilibrium: delete it, unless it is the initial position's only route
  // into the terminals, which is the confinement case instead.
  if (game.terminal_count() >= 2) {
    for (int u : game.internals()) {
      int c = terminal_of_rank(game, game.controller(u), game.terminal_count());
      if (c == -1 || !game.has_move(u, c) || game.successors(u).size() < 2) continue;
      if (!init_reaches_terminal_without(game, u, c)) {
        res.bottleneck = {game.name(u), game.name(c)};
        return res;
      }
      ReductionStep step;
      step.kind = ReductionStep::Kind::WorstTerminal;
      step.pos = game.name(u);
      step.target = game.name(c);
      step.deleted.push_back({step.pos, step.target});
      GameDef def = game.to_def();
      std::erase_if(def.moves, [&](auto& m) {
        return m.first == step.pos && m.second == step.target;
      });
      res.applied = AppliedReduction{Game::build(def), std::move(step)};
      return res;
    }
  }
  return res;
}

Situation lift_step(const Game& parent, const ReductionStep& step,
                    const Game& child, const Situation& sit) {
  validate_situation(child, sit);
  Situation out;
  out.choice.assign(static_cast<std::size_t>(parent.position_count()), -1);
  for (int v : child.internals()) {
    int pv = parent.position(child.name(v));
    int pw = parent.position(child.name(sit.choice[v]));
    if (pv < 0 || pw < 0)
      throw std::logic_error("reduced game mentions unknown position");
    out.choice[pv] = pw;
  }

  switch (step.kind) {
    case ReductionStep::Kind::RemoveDead:
      for (const std::string& name : step.removed) {
        int v = parent.position(name);
        out.choice[v] = parent.successors(v)[0];
      }
      break;
    case ReductionStep::Kind::ContractDummy: {
      int v = parent.position(step.pos);
      int w = parent.position(step.target);
      int z = out.choice[v];  // the merged position's choice belongs to w
      for (const std::string& x : step.redirected) {
        int px = parent.position(x);
        if (out.choice[px] == v) out.choice[px] = w;
      }
      out.choice[v] = w;
      if (z == v)
        out.choice[w] = parent.has_move(w, v) ? v : w;
      else
        out.choice[w] = z;
      break;
    }
    case ReductionStep::Kind::AbsorbTerminalDummy: {
      int v = parent.position(step.pos);
      int t = parent.position(step.target);
      for (const std::string& x : step.redirected) {
        int px = parent.position(x);
        if (out.choice[px] == t) out.choice[px] = v;
      }
      out.choice[v] = t;
      break;
    }
    default:
      break;  // move deletions only: the child situation is valid as-is
  }
  validate_situation(parent, out);
  return out;
}

ReductionTrace reduce_to_fixpoint(const Game& game) {
  ReductionTrace trace;
  const Game* cur = &game;
  for (;;) {
    ScanResult scan = next_reduction(*cur);
    if (!scan.applied) return trace;
    trace.steps.push_back(std::move(scan.applied->step));
    trace.games.push_back(std::move(scan.applied->game));
    cur = &trace.games.back();
  }
}

bool all_terminal_moves_second_best(const Game& game) {
  for (int v : game.internals())
    for (int w : game.successors(v))
      if (game.is_terminal(w) && game.terminal_rank(game.controller(v), w) != 2)
        return false;
  return true;
}

Situation bottleneck_ne(const Game& game, const std::string& u,
                        const std::string& c) {
  int un = game.position(u), cn = game.position(c);
  if (un < 0 || game.is_terminal(un) || cn < 0 || !game.is_terminal(cn) ||
      !game.has_move(un, cn))
    throw ValidationError("no move " + u + " -> " + c);

  std::vector<int> parent(static_cast<std::size_t>(game.position_count()), -1);
  std::vector<char> seen(static_cast<std::size_t>(game.position_count()), 0);
  std::deque<int> queue{game.init_position()};
  seen[static_cast<std::size_t>(game.init_position())] = 1;
  while (!queue.empty() && !seen[static_cast<std::size_t>(un)]) {
    int x = queue.front();
    queue.pop_front();
    if (game.is_terminal(x)) continue;
    for (int w : game.successors(x))
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        parent[static_cast<std::size_t>(w)] = x;
        queue.push_back(w);
      }
  }
  if (!seen[static_cast<std::size_t>(un)])
    throw ValidationError(u + " is not reachable from the initial position");

  Situation sit = lowest_moves(game);
  for (int x = un; parent[static_cast<std::size_t>(x)] != -1;
       x = parent[static_cast<std::size_t>(x)])
    sit.choice[parent[static_cast<std::size_t>(x)]] = x;
  sit.choice[un] = cn;
  validate_situation(game, sit);
  return sit;
}

Situation switching_transform(const Game& game, const Situation& sigma) {
  Play play = evaluate(game, sigma);
  if (!play.outcome.is_terminal())
    throw ValidationError("switching needs a situation with a terminal outcome");
  int a = play.outcome.terminal;
  for (int v : game.internals())
    for (int w : game.successors(v))
      if (game.is_terminal(w) && game.terminal_rank(game.controller(v), w) == 1)
        throw ValidationError("best-terminal move still present at " + game.name(v));
  if (!check_ne(game, sigma).is_ne)
    throw ValidationError("switching needs an equilibrium");

  Situation out = sigma;
  for (int v : game.internals()) {
    int z = sigma.choice[v];
    if (!game.is_terminal(z) || z == a) continue;
    int pick = -1;
    for (int w : game.successors(v))
      if (!game.is_terminal(w)) {
        pick = w;
        break;
      }
    if (pick == -1)
      throw ValidationError("no non-terminal alternative at " + game.name(v));
    out.choice[v] = pick;
  }

  Play after = evaluate(game, out);
  if (after.walk != play.walk)
    throw std::logic_error("switching changed the play");
  if (!check_ne(game, out).is_ne)
    throw std::logic_error("switching broke the equilibrium");
  return out;
}

namespace {

Situation oracle_pick(const Game& game, SolveStats& stats) {
  ++stats.oracle_fallbacks;
  Certificate cert = certify(game, true);
  if (!cert.terminal_nes.empty()) return cert.terminal_nes.front();
  if (!cert.other_nes.empty()) return cert.other_nes.front();
  throw NoEquilibriumError("exhaustive scan found no equilibrium");
}

Situation solve_level(const Game& game, SolveStats& stats) {
  if (!init_reaches_terminal_without(game, -1, -1)) {
    Situation sit = solve_unreachable(game);
    if (check_ne(game, sit).is_ne) return sit;
    ++stats.lift_failures;
    return oracle_pick(game, stats);
  }

  // Forced terminal move at the initial position: the outcome is fixed no
  // matter what anyone does, so any situation is an equilibrium.
  int init = game.init_position();
  if (game.successors(init).size() == 1 &&
      game.is_terminal(game.successors(init)[0]))
    return lowest_moves(game);

  ScanResult scan = next_reduction(game);
  if (scan.bottleneck) {
    ++stats.bottlenecks;
    Situation sit = bottleneck_ne(game, scan.bottleneck->first,
                                  scan.bottleneck->second);
    if (check_ne(game, sit).is_ne) return sit;
    ++stats.lift_failures;
    return oracle_pick(game, stats);
  }
  if (scan.applied) {
    ++stats.reductions;
    Situation sub = solve_level(scan.applied->game, stats);
    Situation cand = lift_step(game, scan.applied->step, scan.applied->game, sub);
    if (check_ne(game, cand).is_ne) return cand;
    ++stats.lift_failures;
    return oracle_pick(game, stats);
  }

  // Fixpoint: all terminal moves are second-best moves. Pin the first one by
  // deleting its owner's non-terminal moves and solve the rest; if the pinned
  // terminal wins down there, strip other terminal choices before lifting.
  if (!all_terminal_moves_second_best(game)) return oracle_pick(game, stats);
  int u = -1, b = -1;
  for (int v : game.internals()) {
    for (int w : game.successors(v))
      if (game.is_terminal(w)) {
        u = v;
        b = w;
        break;
      }
    if (u != -1) break;
  }
  if (u == -1) return oracle_pick(game, stats);  // unreachable if init reaches T

  ReductionStep step;
  step.kind = ReductionStep::Kind::PinSecondBest;
  step.pos = game.name(u);
  step.target = game.name(b);
  GameDef def = game.to_def();
  std::erase_if(def.moves, [&](auto& m) {
    if (m.first != step.pos || game.is_terminal(game.position(m.second)))
      return false;
    step.deleted.push_back(m);
    return true;
  });
  if (step.deleted.empty()) return oracle_pick(game, stats);  // no progress
  Game pinned = Game::build(def);

  ++stats.pinned;
  Situation sub = solve_level(pinned, stats);
  Outcome got = evaluate(pinned, sub).outcome;
  Situation cand = got == Outcome::at(pinned.position(step.target))
                       ? switching_transform(pinned, sub)
                       : sub;
  Situation out = lift_step(game, step, pinned, cand);
  if (check_ne(game, out).is_ne) return out;
  ++stats.lift_failures;
  return oracle_pick(game, stats);
}

}  // namespace

Terminal3Result solve_terminal3(const Game& game) {
  SolveStats stats;
  GameClass cls = classify(game);
  Situation sit = (!cls.terminal_game || game.terminal_count() > 3)
                      ? oracle_pick(game, stats)
                      : solve_level(game, stats);
  return Terminal3Result{sit, evaluate(game, sit).outcome, stats};
}

}  // namespace dgg
