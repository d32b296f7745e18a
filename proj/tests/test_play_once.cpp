#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "dgg/harness.hpp"
#include "dgg/io.hpp"
#include "dgg/oracle.hpp"
#include "dgg/play_once.hpp"

using namespace dgg;

namespace {

GenParams play_once_params(std::uint64_t seed, int max_positions) {
  GenParams p;
  p.positions = 3 + static_cast<int>(seed % (max_positions - 2));
  p.players = p.positions;
  p.terminals = 1 + static_cast<int>(seed % 3);
  p.max_out_degree = 2 + static_cast<int>(seed % 2);
  p.force_play_once = true;
  p.seed = seed;
  return p;
}

std::vector<int> ids(const Game& g, const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const auto& n : names) out.push_back(g.position(n));
  std::sort(out.begin(), out.end());
  return out;
}

// Kahn check over an explicit arc set, for feedback-set verification.
bool arcs_acyclic(const std::set<std::pair<int, int>>& arcs,
                  const std::set<int>& verts) {
  std::map<int, int> indeg;
  for (int v : verts) indeg[v];
  for (auto& [a, b] : arcs)
    if (indeg.count(b)) ++indeg[b];
  std::vector<int> ready;
  for (auto& [v, d] : indeg)
    if (d == 0) ready.push_back(v);
  size_t seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (auto& [a, b] : arcs)
      if (a == v && indeg.count(b) && --indeg[b] == 0) ready.push_back(b);
  }
  return seen == indeg.size();
}

// Five-region fixture: one escape position, a two-position cycle holding the
// initial position, a self-loop trap, and one stripped leftover.
Game regions_game() {
  GameDef def;
  def.players = 5;
  def.terminals = {"x", "y"};
  def.internals = {{"e", 1}, {"q", 2}, {"r", 3}, {"w1", 4}, {"w2", 5}};
  def.init = "w1";
  def.moves = {{"w1", "w2"}, {"w1", "e"}, {"w2", "w1"}, {"e", "x"},
               {"e", "q"},   {"q", "q"},  {"q", "r"},   {"r", "e"},
               {"r", "y"}};
  def.prefs = {{"x", "y", "inf"},
               {"inf", "x", "y"},
               {"inf", "x", "y"},
               {"inf", "x", "y"},
               {"inf", "x", "y"}};
  return Game::build(def);
}

}  // namespace

TEST_CASE("normalization is the identity on fig2") {
  Game g = fixture("fig2");
  Normalized norm = normalize_play_once(g);
  CHECK(norm.game == g);
  CHECK(norm.steps.empty());
  CHECK_FALSE(norm.init_absorbed);
  CHECK(norm.player_map == std::vector<int>{1, 2, 3});
}

TEST_CASE("normalization rejects non-play-once games") {
  CHECK_THROWS_WITH_AS(normalize_play_once(fixture("fig1")),
                       doctest::Contains("play-once"), ValidationError);
  CHECK_THROWS_AS(solve_play_once(fixture("fig1")), ValidationError);
}

TEST_CASE("several terminal moves collapse to the controller's best") {
  GameDef def;
  def.players = 2;
  def.terminals = {"x", "y"};
  def.internals = {{"u", 1}, {"v", 2}};
  def.init = "u";
  def.moves = {{"u", "x"}, {"u", "y"}, {"u", "v"}, {"v", "u"}};
  def.prefs = {{"x", "y", "inf"}, {"inf", "x", "y"}};
  Game g = Game::build(def);
  Normalized norm = normalize_play_once(g);
  REQUIRE(norm.steps.size() == 1);
  CHECK(norm.steps[0].kind == NormalizeStep::Kind::DropWorseTerminals);
  CHECK(norm.steps[0].pos == "u");
  CHECK(norm.steps[0].terminal == "x");
  int u = norm.game.position("u");
  CHECK(norm.game.successors(u).size() == 2);
  CHECK(norm.game.has_move(u, norm.game.position("x")));
  CHECK_FALSE(norm.game.has_move(u, norm.game.position("y")));
  CHECK_FALSE(norm.init_absorbed);
  CHECK(norm.player_map == std::vector<int>{1, 2});
}

TEST_CASE("a forced-terminal position is absorbed and its player retired") {
  GameDef def;
  def.players = 2;
  def.terminals = {"x", "y"};
  def.internals = {{"u", 1}, {"v", 2}};
  def.init = "u";
  def.moves = {{"u", "v"}, {"u", "y"}, {"v", "x"}};
  def.prefs = {{"x", "y", "inf"}, {"y", "x", "inf"}};
  Game g = Game::build(def);
  Normalized norm = normalize_play_once(g);
  // v collapses into x, u's arc is redirected, then u's two terminal moves
  // collapse to x, leaving the initial position forced
  REQUIRE(norm.steps.size() == 2);
  CHECK(norm.steps[0].kind == NormalizeStep::Kind::MergeIntoTerminal);
  CHECK(norm.steps[0].pos == "v");
  CHECK(norm.steps[0].terminal == "x");
  CHECK(norm.steps[0].redirected == std::vector<std::string>{"u"});
  CHECK(norm.steps[1].kind == NormalizeStep::Kind::DropWorseTerminals);
  CHECK(norm.steps[1].pos == "u");
  CHECK(norm.steps[1].terminal == "x");
  CHECK(norm.init_absorbed);
  CHECK(norm.game.player_count() == 1);
  CHECK(norm.player_map == std::vector<int>{1});
  CHECK(norm.game.position("v") == -1);

  // the end-to-end solve lifts back through both rewrites
  Situation sit = solve_play_once(g);
  CHECK(sit.choice[g.position("u")] == g.position("v"));
  CHECK(sit.choice[g.position("v")] == g.position("x"));
  CHECK(evaluate(g, sit).outcome == Outcome::at(g.position("x")));
}

TEST_CASE("fig2 partitions into a bare cyclic start region") {
  Game g = fixture("fig2");
  Regions r = partition(g);
  CHECK(r.escape.empty());
  CHECK(r.start_region == ids(g, {"q1", "q2", "q3"}));
  CHECK(r.cycle_bound.empty());
  CHECK(r.acyclic_rest.empty());
  verify_partition(g, r);
  CHECK(start_region_has_cycle(g, r));
  Situation sit = confined_cycle_ne(g, r);
  CHECK(print_situation_line(g, sit) == "q1->q2 q2->q3 q3->q1");
  CHECK(solve_play_once(g) == sit);
}

TEST_CASE("fig2-terminal partitions into pure escape with one feedback arc") {
  Game g = fixture("fig2-terminal");
  Regions r = partition(g);
  CHECK(r.escape == ids(g, {"q1", "q2", "q3"}));
  CHECK(r.start_region.empty());
  CHECK(r.cycle_bound.empty());
  CHECK(r.acyclic_rest.empty());
  verify_partition(g, r);
  CHECK_FALSE(start_region_has_cycle(g, r));
  auto feedback = minimal_feedback_arcs(g, r);
  REQUIRE(feedback.size() == 1);
  CHECK(feedback[0] == std::pair<int, int>{g.position("q3"), g.position("q1")});
  Situation sit = terminal_ne_construct(g, r, feedback);
  CHECK(print_situation_line(g, sit) == "q1->q2 q2->q3 q3->c");
  CHECK(evaluate(g, sit).outcome == Outcome::at(g.position("c")));
  CHECK(solve_play_once(g) == sit);
}

TEST_CASE("all four regions can be inhabited at once") {
  Game g = regions_game();
  Regions r = partition(g);
  CHECK(r.escape == ids(g, {"e"}));
  CHECK(r.start_region == ids(g, {"w1", "w2"}));
  CHECK(r.cycle_bound == ids(g, {"q"}));
  CHECK(r.acyclic_rest == ids(g, {"r"}));
  verify_partition(g, r);
  CHECK(start_region_has_cycle(g, r));
  Situation sit = solve_play_once(g);
  CHECK_FALSE(evaluate(g, sit).outcome.is_terminal());
  CHECK(sit.choice[g.position("w1")] == g.position("w2"));
  CHECK(sit.choice[g.position("w2")] == g.position("w1"));
}

TEST_CASE("verify_partition rejects tampered regions") {
  Game g = regions_game();
  Regions r = partition(g);
  Regions missing = r;
  missing.acyclic_rest.clear();
  CHECK_THROWS_WITH(verify_partition(g, missing),
                    doctest::Contains("do not partition"));
  Regions swapped = r;
  std::swap(swapped.cycle_bound, swapped.acyclic_rest);
  CHECK_THROWS_AS(verify_partition(g, swapped), std::logic_error);
  Regions leak = r;
  // moving the escape position into the start region breaks closure there
  leak.start_region = ids(g, {"e", "w1", "w2"});
  leak.escape.clear();
  CHECK_THROWS_AS(verify_partition(g, leak), std::logic_error);
}

TEST_CASE("partition laws hold on random play-once games") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Game g = random_game(play_once_params(seed, 8));
    Normalized norm = normalize_play_once(g);
    if (norm.init_absorbed) continue;
    Regions r = partition(norm.game);
    verify_partition(norm.game, r);
  }
}

TEST_CASE("feedback arc sets are inclusion-minimal") {
  int exercised = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Game g = random_game(play_once_params(seed, 8));
    Normalized norm = normalize_play_once(g);
    if (norm.init_absorbed) continue;
    const Game& n = norm.game;
    Regions r = partition(n);
    if (start_region_has_cycle(n, r)) continue;
    auto feedback = minimal_feedback_arcs(n, r);

    std::set<int> verts;
    std::set<std::pair<int, int>> arcs;
    std::set<int> q(r.cycle_bound.begin(), r.cycle_bound.end());
    for (int v = 0; v < n.position_count(); ++v)
      if (!q.count(v)) verts.insert(v);
    for (int v : n.internals())
      if (verts.count(v))
        for (int w : n.successors(v))
          if (verts.count(w)) arcs.insert({v, w});
    for (auto& f : feedback) {
      CHECK(arcs.erase(f) == 1);
      // only non-terminal arcs leaving escape positions may be cut
      CHECK(std::binary_search(r.escape.begin(), r.escape.end(), f.first));
      CHECK_FALSE(n.is_terminal(f.second));
    }
    CHECK(arcs_acyclic(arcs, verts));
    for (auto& f : feedback) {
      arcs.insert(f);
      CHECK_FALSE(arcs_acyclic(arcs, verts));  // every cut arc is necessary
      arcs.erase(f);
    }
    if (!feedback.empty()) ++exercised;
  }
  CHECK(exercised > 0);
}

TEST_CASE("random play-once games always get a verified equilibrium") {
  int cyclic = 0, terminal = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Game g = random_game(play_once_params(seed, 8));
    Situation sit = solve_play_once(g);
    CHECK(check_ne(g, sit).is_ne);
    (evaluate(g, sit).outcome.is_terminal() ? terminal : cyclic) += 1;
  }
  // the sweep must exercise both construction branches
  CHECK(cyclic > 0);
  CHECK(terminal > 0);
}

TEST_CASE("oracle confirms equilibrium existence on the small subset") {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    Game g = random_game(play_once_params(seed, 6));
    Situation sit = solve_play_once(g);
    CHECK(check_ne(g, sit).is_ne);
    CHECK(certify(g, false).has_ne());
  }
}

TEST_CASE("endless equilibria exist exactly when the start region has a cycle") {
  int with = 0, without = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    Game g = random_game(play_once_params(seed, 6));
    Certificate cert = certify(g, true);
    bool endless_ne = !cert.other_nes.empty();
    Normalized norm = normalize_play_once(g);
    bool cyclic_w = false;
    if (!norm.init_absorbed) {
      Regions r = partition(norm.game);
      cyclic_w = start_region_has_cycle(norm.game, r);
    }
    CHECK(endless_ne == cyclic_w);
    (cyclic_w ? with : without) += 1;
  }
  CHECK(with > 0);
  CHECK(without > 0);
}
