#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "dgg/harness.hpp"
#include "dgg/io.hpp"

using namespace dgg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string data_file(const std::string& name) {
  return std::string(DGG_DATA_DIR) + "/" + name;
}

int count_all(const std::string& text, const std::string& needle) {
  int n = 0;
  for (size_t at = text.find(needle); at != std::string::npos;
       at = text.find(needle, at + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("shipped game files equal their fixtures") {
  CHECK(parse_game(slurp(data_file("fig1.dgg"))) == fixture("fig1"));
  CHECK(parse_game(slurp(data_file("fig2.dgg"))) == fixture("fig2"));
  CHECK(parse_game(slurp(data_file("fig2-terminal.dgg"))) == fixture("fig2-terminal"));
}

TEST_CASE("parse accepts comments, blank lines and reordered directives") {
  // moves must follow the declarations of both endpoints; everything else
  // may come in any order
  std::string text =
      "# two-player handover\n"
      "pref 2: x > inf\n"
      "\n"
      "position v controller=2   # controller comment\n"
      "terminal x\n"
      "position u controller=1\n"
      "move u v\n"
      "move v x\n"
      "move u x\n"
      "init u\n"
      "players 2\n"
      "pref 1: inf > x\n";
  Game g = parse_game(text);
  CHECK(g.player_count() == 2);
  CHECK(g.position_count() == 3);
  CHECK(g.name(g.init_position()) == "u");
  CHECK(g.has_move(g.position("u"), g.position("v")));
  CHECK(g.rank(1, Outcome::infinite()) == 1);
}

TEST_CASE("parse round-trips print on fixtures and random games") {
  for (const char* name : {"fig1", "fig2", "fig2-terminal"}) {
    Game g = fixture(name);
    CHECK(parse_game(print_game(g)) == g);
  }
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GenParams p;
    p.positions = 2 + static_cast<int>(seed % 7);
    p.terminals = static_cast<int>(seed % 4);
    p.players = 1 + static_cast<int>((seed / 2) % 4);
    p.max_out_degree = 2 + static_cast<int>(seed % 3);
    p.seed = seed;
    Game g = random_game(p);
    CHECK(parse_game(print_game(g)) == g);
  }
}

TEST_CASE("parse errors carry line numbers") {
  auto bad = [](const std::string& text, const std::string& needle) {
    try {
      parse_game(text);
      FAIL("expected ParseError for ", needle);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  bad("players 2\nbogus x\n", "line 2: unknown directive 'bogus'");
  bad("players two\n", "line 1: expected a number");
  bad("players 2\nplayers 2\n", "duplicate players line");
  bad("players 1\nterminal inf\n", "line 2: 'inf' is reserved");
  bad("players 1\nterminal 9x\n", "bad identifier '9x'");
  bad("players 1\nterminal x x\n", "duplicate position x");
  bad("players 1\nterminal x\nposition u controller=1\nmove u x\nmove u x\n",
      "line 5: duplicate move u x");
  bad("players 1\nterminal x\nmove x u\n", "unknown position u in move");
  bad("players 1\nterminal x\nposition u controller=1\nmove x u\n",
      "move from terminal x");
  bad("players 1\nterminal x\nposition u controller=2\nmove u x\ninit u\npref 1: x > inf\n",
      "unknown controller 2 for position u");
  bad("players 1\nterminal x\nposition u controller=1\ninit u\npref 1: x > inf\n",
      "position u has no moves");
  bad("players 1\nterminal x\nposition u controller=1\nmove u x\npref 1: x > inf\n",
      "missing init");
  bad("players 1\nterminal x\nposition u controller=1\nmove u x\ninit u\n",
      "missing pref for player 1");
  bad("players 1\nterminal x\nposition u controller=1\nmove u x\ninit u\npref 1: x\n",
      "missing outcome inf");
  bad("players 2\nterminal x\nposition u controller=1\nmove u x\ninit u\n"
      "pref 1: x > inf\npref 2: x > x > inf\n",
      "preference tie");
  bad("players 1\nterminal x\nposition u controller=1\nmove u x\ninit u\n"
      "pref 1: x >> inf\n",
      "malformed pref list");
  ParseError probe(3, "boom");
  CHECK(probe.line == 3);
  CHECK(std::string(probe.what()) == "line 3: boom");
}

TEST_CASE("situation parsing and printing") {
  Game g = fixture("fig2");
  std::string text = slurp(data_file("cycle.sit"));
  Situation s = parse_situation(g, text);
  CHECK(s.choice[g.position("q1")] == g.position("q2"));
  CHECK(print_situation(g, s) == "q1 -> q2\nq2 -> q3\nq3 -> q1\n");
  CHECK(print_situation_line(g, s) == "q1->q2 q2->q3 q3->q1");
  CHECK(parse_situation(g, print_situation(g, s)) == s);

  auto bad = [&](const std::string& t, const std::string& needle) {
    try {
      parse_situation(g, t);
      FAIL("expected ParseError for ", needle);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  bad("q1 q2\n", "expected FROM -> TO");
  bad("zz -> q2\n", "unknown position zz");
  bad("a -> q2\n", "choice at terminal a");
  bad("q1 -> q3\n", "no move q1 -> q3");
  bad("q1 -> q2\nq1 -> a\n", "duplicate choice for q1");
  bad("q1 -> q2\nq2 -> q3\n", "missing choice for q3");
}

TEST_CASE("dot export marks chosen arcs") {
  Game g = fixture("fig2");
  Situation s = parse_situation(g, slurp(data_file("cycle.sit")));
  std::string with = export_dot(g, &s);
  CHECK(with.rfind("digraph", 0) == 0);
  CHECK(with.back() == '\n');
  CHECK(count_all(with, "[shape=box]") == 3);
  CHECK(count_all(with, "[style=bold]") == 3);
  CHECK(count_all(with, " -> ") == 6);
  CHECK(with.find("q1 [label=\"q1/1\"]") != std::string::npos);
  std::string without = export_dot(g, nullptr);
  CHECK(count_all(without, "[style=bold]") == 0);
  CHECK(count_all(without, " -> ") == 6);
  // braces balance, which is as much dot grammar as we lean on
  CHECK(count_all(without, "{") == count_all(without, "}"));
}
