#include "dgg/play_once.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dgg {

namespace {

// Best terminal successor of pos for its controller, or -1 if none.
int best_terminal_succ(const Game& g, int pos) {
  int best = -1;
  for (int w : g.successors(pos)) {
    if (!g.is_terminal(w)) continue;
    if (best == -1 || g.prefers(g.controller(pos), Outcome::at(w), Outcome::at(best)))
      best = w;
  }
  return best;
}

bool sorted_contains(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}

// Kahn pass over an arc set restricted to `inset` vertices. Returns true if
// acyclic. `arcs` maps position id to its outgoing targets (already filtered).
bool acyclic(const std::vector<std::vector<int>>& arcs,
             const std::vector<int>& verts) {
  std::map<int, int> indeg;
  for (int v : verts) indeg[v];
  for (int v : verts)
    for (int w : arcs[v])
      if (indeg.count(w)) ++indeg[w];
  std::deque<int> ready;
  for (auto& [v, d] : indeg)
    if (d == 0) ready.push_back(v);
  std::size_t seen = 0;
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop_front();
    ++seen;
    for (int w : arcs[v]) {
      auto it = indeg.find(w);
      if (it != indeg.end() && --it->second == 0) ready.push_back(w);
    }
  }
  return seen == indeg.size();
}

}  // namespace

Normalized normalize_play_once(const Game& game) {
  GameClass cls = classify(game);
  if (!cls.play_once)
    throw ValidationError("play-once solver needs a play-once game");

  Normalized out{game, {}, {}, false};
  out.player_map.resize(static_cast<std::size_t>(game.player_count()));
  for (int p = 1; p <= game.player_count(); ++p)
    out.player_map[static_cast<std::size_t>(p - 1)] = p;

  for (;;) {
    const Game& g = out.game;

    // A position with several terminal moves keeps only the controller's best.
    int multi = -1;
    for (int v : g.internals()) {
      int terms = 0;
      for (int w : g.successors(v)) terms += g.is_terminal(w) ? 1 : 0;
      if (terms >= 2) {
        multi = v;
        break;
      }
    }
    if (multi != -1) {
      int keep = best_terminal_succ(g, multi);
      std::string vname = g.name(multi), tname = g.name(keep);
      GameDef def = g.to_def();
      std::vector<std::pair<std::string, std::string>> moves;
      for (auto& m : def.moves) {
        if (m.first == vname && m.second != tname &&
            g.is_terminal(g.position(m.second)))
          continue;
        moves.push_back(m);
      }
      def.moves = std::move(moves);
      out.steps.push_back({NormalizeStep::Kind::DropWorseTerminals,
                           std::move(vname), std::move(tname), {}});
      out.game = Game::build(def);
      continue;
    }

    // A position whose every move is terminal (now: exactly one terminal
    // move). The initial position stops the rewrite; any other is absorbed.
    int forced = -1;
    for (int v : g.internals()) {
      bool all_term = true;
      for (int w : g.successors(v)) all_term = all_term && g.is_terminal(w);
      if (all_term) {
        forced = v;
        break;
      }
    }
    if (forced == -1) break;
    if (forced == g.init_position()) {
      out.init_absorbed = true;
      break;
    }

    std::string vname = g.name(forced);
    std::string tname = g.name(g.successors(forced)[0]);
    int ctrl = g.controller(forced);
    GameDef def = g.to_def();

    std::set<std::pair<std::string, std::string>> have(def.moves.begin(),
                                                       def.moves.end());
    std::vector<std::string> redirected;
    std::vector<std::pair<std::string, std::string>> moves;
    for (auto& m : def.moves) {
      if (m.first == vname) continue;  // the absorbed position's own move
      if (m.second == vname) {
        if (have.count({m.first, tname})) continue;  // arc already there
        have.insert({m.first, tname});
        redirected.push_back(m.first);
        moves.emplace_back(m.first, tname);
      } else {
        moves.push_back(m);
      }
    }
    def.moves = std::move(moves);
    std::erase_if(def.internals, [&](auto& e) { return e.first == vname; });
    for (auto& e : def.internals)
      if (e.second > ctrl) --e.second;
    def.players -= 1;
    def.prefs.erase(def.prefs.begin() + (ctrl - 1));
    out.player_map.erase(out.player_map.begin() + (ctrl - 1));
    out.steps.push_back({NormalizeStep::Kind::MergeIntoTerminal,
                         std::move(vname), std::move(tname),
                         std::move(redirected)});
    out.game = Game::build(def);
  }
  return out;
}

Situation lift_normalized(const Game& original, const Normalized& norm,
                          const Situation& sit) {
  validate_situation(norm.game, sit);
  std::map<std::string, std::string> choice;
  for (int v : norm.game.internals())
    choice[norm.game.name(v)] = norm.game.name(sit.choice[v]);

  for (auto it = norm.steps.rbegin(); it != norm.steps.rend(); ++it) {
    const NormalizeStep& step = *it;
    if (step.kind == NormalizeStep::Kind::DropWorseTerminals)
      continue;  // surviving choices are valid in the wider game as-is
    // Undo an absorption: the position re-appears forced into its terminal,
    // and predecessors that were pointed straight at the terminal go through
    // the position again.
    for (const std::string& x : step.redirected)
      if (choice.count(x) && choice[x] == step.terminal) choice[x] = step.pos;
    choice[step.pos] = step.terminal;
  }

  Situation lifted;
  lifted.choice.assign(static_cast<std::size_t>(original.position_count()), -1);
  for (int v : original.internals()) {
    auto it = choice.find(original.name(v));
    if (it == choice.end())
      throw std::logic_error("lift lost position " + original.name(v));
    int w = original.position(it->second);
    lifted.choice[v] = w;
  }
  validate_situation(original, lifted);
  return lifted;
}

Regions partition(const Game& game) {
  Regions r;
  std::vector<char> in_escape(static_cast<std::size_t>(game.position_count()), 0);
  for (int v : game.internals()) {
    int t = best_terminal_succ(game, v);
    if (t != -1 && game.prefers(game.controller(v), Outcome::at(t), Outcome::infinite())) {
      r.escape.push_back(v);
      in_escape[static_cast<std::size_t>(v)] = 1;
    }
  }

  std::vector<char> in_start(static_cast<std::size_t>(game.position_count()), 0);
  if (!in_escape[static_cast<std::size_t>(game.init_position())]) {
    std::vector<int> allowed;
    for (int v : game.internals())
      if (!in_escape[static_cast<std::size_t>(v)]) allowed.push_back(v);
    r.start_region = reachable(game, game.init_position(), allowed);
    for (int v : r.start_region) in_start[static_cast<std::size_t>(v)] = 1;
  }

  // Remaining positions that can sustain an endless walk among themselves:
  // repeatedly discard those whose every remaining move leaves the set.
  std::vector<int> rest;
  for (int v : game.internals())
    if (!in_escape[static_cast<std::size_t>(v)] && !in_start[static_cast<std::size_t>(v)])
      rest.push_back(v);
  std::set<int> live(rest.begin(), rest.end());
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = live.begin(); it != live.end();) {
      bool keeps = false;
      for (int w : game.successors(*it))
        if (live.count(w)) {
          keeps = true;
          break;
        }
      if (keeps) {
        ++it;
      } else {
        it = live.erase(it);
        changed = true;
      }
    }
  }
  for (int v : rest)
    (live.count(v) ? r.cycle_bound : r.acyclic_rest).push_back(v);
  return r;
}

void verify_partition(const Game& game, const Regions& regions) {
  std::vector<int> all;
  for (const std::vector<int>* part :
       {&regions.escape, &regions.start_region, &regions.cycle_bound,
        &regions.acyclic_rest})
    all.insert(all.end(), part->begin(), part->end());
  std::sort(all.begin(), all.end());
  if (all != game.internals())
    throw std::logic_error("regions do not partition the positions");

  for (int v : regions.start_region)
    for (int w : game.successors(v))
      if (!game.is_terminal(w) && !sorted_contains(regions.start_region, w) &&
          !sorted_contains(regions.escape, w))
        throw std::logic_error("start region leaks to " + game.name(w));

  for (int v : regions.cycle_bound) {
    bool stays = false;
    for (int w : game.successors(v))
      stays = stays || sorted_contains(regions.cycle_bound, w);
    if (!stays)
      throw std::logic_error("cycle_bound position " + game.name(v) +
                             " cannot stay inside");
  }

  std::vector<std::vector<int>> arcs(static_cast<std::size_t>(game.position_count()));
  for (int v : regions.acyclic_rest)
    for (int w : game.successors(v))
      if (sorted_contains(regions.acyclic_rest, w))
        arcs[static_cast<std::size_t>(v)].push_back(w);
  if (!acyclic(arcs, regions.acyclic_rest))
    throw std::logic_error("acyclic_rest contains a cycle");
}

bool start_region_has_cycle(const Game& game, const Regions& regions) {
  std::vector<std::vector<int>> arcs(static_cast<std::size_t>(game.position_count()));
  for (int v : regions.start_region)
    for (int w : game.successors(v))
      if (sorted_contains(regions.start_region, w))
        arcs[static_cast<std::size_t>(v)].push_back(w);
  return !acyclic(arcs, regions.start_region);
}

Situation confined_cycle_ne(const Game& game, const Regions& regions) {
  // Survivors of dead-end stripping inside the start region: exactly the
  // positions from which the walk can stay in the region forever.
  std::set<int> live(regions.start_region.begin(), regions.start_region.end());
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = live.begin(); it != live.end();) {
      bool keeps = false;
      for (int w : game.successors(*it))
        if (live.count(w)) {
          keeps = true;
          break;
        }
      if (keeps) {
        ++it;
      } else {
        it = live.erase(it);
        changed = true;
      }
    }
  }
  if (live.empty())
    throw std::logic_error("confined cycle requested but start region is acyclic");

  // Walk from the lowest survivor along lowest surviving successors until a
  // repeat; the repeated tail is the cycle.
  std::vector<int> walk;
  std::map<int, int> at;
  int v = *live.begin();
  while (!at.count(v)) {
    at[v] = static_cast<int>(walk.size());
    walk.push_back(v);
    int next = -1;
    for (int w : game.successors(v))
      if (live.count(w)) {
        next = w;
        break;
      }
    v = next;
  }
  std::vector<int> cycle(walk.begin() + at[v], walk.end());
  std::set<int> on_cycle(cycle.begin(), cycle.end());

  // Shortest path from init to the cycle inside the start region.
  std::vector<int> parent(static_cast<std::size_t>(game.position_count()), -1);
  std::vector<char> seen(static_cast<std::size_t>(game.position_count()), 0);
  std::deque<int> queue{game.init_position()};
  seen[static_cast<std::size_t>(game.init_position())] = 1;
  int entry = -1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (on_cycle.count(u)) {
      entry = u;
      break;
    }
    for (int w : game.successors(u)) {
      if (!sorted_contains(regions.start_region, w) || seen[static_cast<std::size_t>(w)])
        continue;
      seen[static_cast<std::size_t>(w)] = 1;
      parent[static_cast<std::size_t>(w)] = u;
      queue.push_back(w);
    }
  }
  if (entry == -1)
    throw std::logic_error("start region cycle not reachable from init");

  Situation sit;
  sit.choice.assign(static_cast<std::size_t>(game.position_count()), -1);
  // Everyone else keeps the play endless too, so no deviation can terminate
  // through them: prefer a non-terminal move when one exists.
  for (int u : game.internals()) {
    int pick = game.successors(u)[0];
    for (int w : game.successors(u))
      if (!game.is_terminal(w)) {
        pick = w;
        break;
      }
    sit.choice[u] = pick;
  }
  for (int u = entry; parent[static_cast<std::size_t>(u)] != -1;
       u = parent[static_cast<std::size_t>(u)])
    sit.choice[parent[static_cast<std::size_t>(u)]] = u;
  for (std::size_t k = 0; k < cycle.size(); ++k)
    sit.choice[cycle[k]] = cycle[(k + 1) % cycle.size()];
  validate_situation(game, sit);
  return sit;
}

std::vector<std::pair<int, int>> minimal_feedback_arcs(const Game& game,
                                                       const Regions& regions) {
  // Vertices outside cycle_bound, with their arcs among themselves.
  std::vector<char> kept(static_cast<std::size_t>(game.position_count()), 1);
  for (int v : regions.cycle_bound) kept[static_cast<std::size_t>(v)] = 0;
  std::vector<int> verts;
  for (int v = 0; v < game.position_count(); ++v)
    if (kept[static_cast<std::size_t>(v)]) verts.push_back(v);

  std::vector<std::pair<int, int>> candidates;  // removable: leave escape, non-terminal
  std::vector<std::vector<int>> arcs(static_cast<std::size_t>(game.position_count()));
  for (int v : verts) {
    if (game.is_terminal(v)) continue;
    bool from_escape = sorted_contains(regions.escape, v);
    for (int w : game.successors(v)) {
      if (!kept[static_cast<std::size_t>(w)]) continue;
      if (from_escape && !game.is_terminal(w))
        candidates.push_back({v, w});
      else
        arcs[static_cast<std::size_t>(v)].push_back(w);
    }
  }
  if (!acyclic(arcs, verts))
    throw std::logic_error(
        "cycle outside cycle_bound avoiding all escape positions");

  // Add candidates back one at a time (they are generated in name order)
  // while the graph stays acyclic; the rest form the minimal removal set.
  std::vector<std::pair<int, int>> removed;
  for (auto& [v, w] : candidates) {
    arcs[static_cast<std::size_t>(v)].push_back(w);
    if (acyclic(arcs, verts)) continue;
    arcs[static_cast<std::size_t>(v)].pop_back();
    removed.push_back({v, w});
  }
  return removed;
}

Situation terminal_ne_construct(const Game& game, const Regions& regions,
                                const std::vector<std::pair<int, int>>& feedback) {
  std::set<std::pair<int, int>> dropped(feedback.begin(), feedback.end());
  std::vector<char> kept(static_cast<std::size_t>(game.position_count()), 1);
  for (int v : regions.cycle_bound) kept[static_cast<std::size_t>(v)] = 0;

  // The restricted game: same positions minus cycle_bound, same players,
  // arcs among the kept positions minus the feedback set.
  GameDef def = game.to_def();
  std::erase_if(def.internals, [&](auto& e) {
    return !kept[static_cast<std::size_t>(game.position(e.first))];
  });
  std::erase_if(def.moves, [&](auto& m) {
    int a = game.position(m.first), b = game.position(m.second);
    return !kept[static_cast<std::size_t>(a)] || !kept[static_cast<std::size_t>(b)] ||
           dropped.count({a, b}) != 0;
  });
  Game sub = Game::build(def);

  BackwardInductionResult bi = backward_induction(sub);
  Play play = evaluate(sub, bi.situation);
  if (!play.outcome.is_terminal())
    throw std::logic_error("restricted induction play failed to terminate");
  int root = play.outcome.terminal;  // id in sub

  // In-tree toward the play's terminal: play arcs are pinned first, then a
  // reverse reachability sweep attaches everything else that can get there.
  int n = sub.position_count();
  std::vector<int> tree(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k + 1 < play.walk.size(); ++k)
    tree[static_cast<std::size_t>(play.walk[k])] = play.walk[k + 1];

  std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
  for (int v : sub.internals())
    for (int w : sub.successors(v)) preds[static_cast<std::size_t>(w)].push_back(v);
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  std::deque<int> queue{root};
  visited[static_cast<std::size_t>(root)] = 1;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int y : preds[static_cast<std::size_t>(x)]) {
      if (visited[static_cast<std::size_t>(y)]) continue;
      visited[static_cast<std::size_t>(y)] = 1;
      if (tree[static_cast<std::size_t>(y)] == -1) tree[static_cast<std::size_t>(y)] = x;
      queue.push_back(y);
    }
  }

  Situation sit;
  sit.choice.assign(static_cast<std::size_t>(game.position_count()), -1);
  for (int v : sub.internals()) {
    int orig = game.position(sub.name(v));
    int pick = tree[static_cast<std::size_t>(v)] != -1 ? tree[static_cast<std::size_t>(v)]
                                                       : bi.situation.choice[v];
    sit.choice[orig] = game.position(sub.name(pick));
  }
  // cycle_bound positions route among themselves so any play entering the
  // region never leaves it.
  for (int v : regions.cycle_bound) {
    int pick = -1;
    for (int w : game.successors(v))
      if (sorted_contains(regions.cycle_bound, w)) {
        pick = w;
        break;
      }
    if (pick == -1)
      throw std::logic_error("cycle_bound position lost its inside move");
    sit.choice[v] = pick;
  }
  validate_situation(game, sit);

  // Every position outside cycle_bound either joins the equilibrium play's
  // terminal or gets its induction value; anything else is a construction bug.
  int root_orig = game.position(sub.name(root));
  for (int v : game.internals()) {
    if (!kept[static_cast<std::size_t>(v)]) continue;
    Outcome got = evaluate(game, sit, v).outcome;
    Outcome bi_val = bi.value[sub.position(game.name(v))];
    if (bi_val.is_terminal())
      bi_val = Outcome::at(game.position(sub.name(bi_val.terminal)));
    if (!(got == Outcome::at(root_orig)) && !(got == bi_val))
      throw std::logic_error("constructed play from " + game.name(v) +
                             " reaches an unplanned outcome");
  }
  return sit;
}

Situation solve_play_once(const Game& game) {
  Normalized norm = normalize_play_once(game);

  Situation sit;
  if (norm.init_absorbed) {
    // The initial position has only its terminal move left; everything else
    // is irrelevant, so each position takes its lowest-named move.
    sit.choice.assign(static_cast<std::size_t>(norm.game.position_count()), -1);
    for (int v : norm.game.internals()) sit.choice[v] = norm.game.successors(v)[0];
  } else {
    Regions regions = partition(norm.game);
    if (start_region_has_cycle(norm.game, regions)) {
      sit = confined_cycle_ne(norm.game, regions);
    } else {
      sit = terminal_ne_construct(norm.game, regions,
                                  minimal_feedback_arcs(norm.game, regions));
    }
  }

  Situation lifted = lift_normalized(game, norm, sit);
  NeVerdict verdict = check_ne(game, lifted);
  if (!verdict.is_ne)
    throw std::logic_error("play-once construction is not an equilibrium");
  return lifted;
}

}  // namespace dgg
