#include "dgg/io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace dgg {

namespace {

bool is_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

int parse_int(const std::string& s, int line, const std::string& what) {
  size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number for " + what + ", got '" + s + "'");
  }
  if (pos != s.size())
    throw ParseError(line, "expected a number for " + what + ", got '" + s + "'");
  return value;
}

}  // namespace

Game parse_game(const std::string& text) {
  GameDef def;
  bool saw_players = false, saw_init = false;
  std::map<std::string, int> decl_line;          // position name -> line
  std::set<std::string> terminal_names;
  std::set<std::pair<std::string, std::string>> move_set;
  std::map<int, int> pref_line;                  // player -> line
  std::map<std::string, int> move_source_count;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto toks = tokens_of(raw);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];

    if (kw == "players") {
      if (toks.size() != 2) throw ParseError(lineno, "usage: players N");
      if (saw_players) throw ParseError(lineno, "duplicate players line");
      saw_players = true;
      def.players = parse_int(toks[1], lineno, "player count");
      if (def.players < 1) throw ParseError(lineno, "player count must be at least 1");
    } else if (kw == "terminal") {
      if (toks.size() < 2) throw ParseError(lineno, "usage: terminal IDENT...");
      for (size_t i = 1; i < toks.size(); ++i) {
        const std::string& name = toks[i];
        if (name == "inf") throw ParseError(lineno, "'inf' is reserved");
        if (!is_ident(name)) throw ParseError(lineno, "bad identifier '" + name + "'");
        if (decl_line.count(name))
          throw ParseError(lineno, "duplicate position " + name);
        decl_line[name] = lineno;
        terminal_names.insert(name);
        def.terminals.push_back(name);
      }
    } else if (kw == "position") {
      if (toks.size() != 3 || toks[2].rfind("controller=", 0) != 0)
        throw ParseError(lineno, "usage: position IDENT controller=K");
      const std::string& name = toks[1];
      if (name == "inf") throw ParseError(lineno, "'inf' is reserved");
      if (!is_ident(name)) throw ParseError(lineno, "bad identifier '" + name + "'");
      if (decl_line.count(name)) throw ParseError(lineno, "duplicate position " + name);
      int player = parse_int(toks[2].substr(11), lineno, "controller");
      decl_line[name] = lineno;
      def.internals.emplace_back(name, player);
    } else if (kw == "init") {
      if (toks.size() != 2) throw ParseError(lineno, "usage: init IDENT");
      if (saw_init) throw ParseError(lineno, "duplicate init line");
      saw_init = true;
      def.init = toks[1];
    } else if (kw == "move") {
      if (toks.size() != 3) throw ParseError(lineno, "usage: move FROM TO");
      const std::string &from = toks[1], &to = toks[2];
      if (!decl_line.count(from))
        throw ParseError(lineno, "unknown position " + from + " in move");
      if (!decl_line.count(to))
        throw ParseError(lineno, "unknown position " + to + " in move");
      if (terminal_names.count(from))
        throw ParseError(lineno, "move from terminal " + from);
      if (!move_set.emplace(from, to).second)
        throw ParseError(lineno, "duplicate move " + from + " " + to);
      ++move_source_count[from];
      def.moves.emplace_back(from, to);
    } else if (kw == "pref") {
      // pref K: O1 > O2 > ... > Om  (tokens may butt against ':' and '>')
      std::string rest = raw.substr(raw.find("pref") + 4);
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw ParseError(lineno, "usage: pref K: O1 > O2 > ...");
      std::string head = rest.substr(0, colon);
      auto head_toks = tokens_of(head);
      if (head_toks.size() != 1) throw ParseError(lineno, "usage: pref K: O1 > O2 > ...");
      int player = parse_int(head_toks[0], lineno, "player");
      if (pref_line.count(player))
        throw ParseError(lineno, "duplicate pref for player " + std::to_string(player));
      pref_line[player] = lineno;
      std::vector<std::string> outcomes;
      std::string tail = rest.substr(colon + 1);
      size_t start = 0;
      for (;;) {
        auto gt = tail.find('>', start);
        std::string piece = tail.substr(start, gt == std::string::npos ? gt : gt - start);
        auto ptoks = tokens_of(piece);
        if (ptoks.size() != 1)
          throw ParseError(lineno, "malformed pref list for player " +
                                       std::to_string(player));
        const std::string& o = ptoks[0];
        if (o != "inf" && !is_ident(o))
          throw ParseError(lineno, "bad identifier '" + o + "'");
        outcomes.push_back(o);
        if (gt == std::string::npos) break;
        start = gt + 1;
      }
      if (static_cast<int>(def.prefs.size()) < player) def.prefs.resize(player);
      def.prefs[player - 1] = std::move(outcomes);
    } else {
      throw ParseError(lineno, "unknown directive '" + kw + "'");
    }
  }

  if (!saw_players) throw ParseError(0, "missing players line");
  if (!saw_init) throw ParseError(0, "missing init");
  for (const auto& [name, player] : def.internals) {
    if (player < 1 || player > def.players)
      throw ParseError(decl_line[name], "unknown controller " + std::to_string(player) +
                                            " for position " + name);
    if (!move_source_count.count(name))
      throw ParseError(decl_line[name], "position " + name + " has no moves");
  }
  for (int p = 1; p <= def.players; ++p)
    if (!pref_line.count(p)) throw ParseError(0, "missing pref for player " + std::to_string(p));
  def.prefs.resize(def.players);

  try {
    return Game::build(def);
  } catch (const ValidationError& e) {
    throw ParseError(0, e.what());  // anything the line checks above missed
  }
}

std::string print_game(const Game& game) {
  std::ostringstream out;
  out << "players " << game.player_count() << "\n";
  if (game.terminal_count() > 0) {
    out << "terminal";
    for (int t : game.terminals()) out << " " << game.name(t);
    out << "\n";
  }
  for (int v : game.internals())
    out << "position " << game.name(v) << " controller=" << game.controller(v) << "\n";
  out << "init " << game.name(game.init_position()) << "\n";
  for (int v : game.internals())
    for (int w : game.successors(v))
      out << "move " << game.name(v) << " " << game.name(w) << "\n";
  GameDef def = game.to_def();
  for (int p = 1; p <= game.player_count(); ++p) {
    out << "pref " << p << ":";
    const auto& row = def.prefs[p - 1];
    for (size_t i = 0; i < row.size(); ++i) out << (i ? " > " : " ") << row[i];
    out << "\n";
  }
  return out.str();
}

Situation parse_situation(const Game& game, const std::string& text) {
  Situation sit;
  sit.choice.assign(game.position_count(), -1);
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto arrow = raw.find("->");
    auto toks = tokens_of(raw);
    if (toks.empty()) continue;
    if (arrow == std::string::npos)
      throw ParseError(lineno, "expected FROM -> TO");
    auto from_toks = tokens_of(raw.substr(0, arrow));
    auto to_toks = tokens_of(raw.substr(arrow + 2));
    if (from_toks.size() != 1 || to_toks.size() != 1)
      throw ParseError(lineno, "expected FROM -> TO");
    int from = game.position(from_toks[0]);
    int to = game.position(to_toks[0]);
    if (from < 0) throw ParseError(lineno, "unknown position " + from_toks[0]);
    if (to < 0) throw ParseError(lineno, "unknown position " + to_toks[0]);
    if (game.is_terminal(from))
      throw ParseError(lineno, "choice at terminal " + from_toks[0]);
    if (!game.has_move(from, to))
      throw ParseError(lineno, "no move " + from_toks[0] + " -> " + to_toks[0]);
    if (sit.choice[from] >= 0)
      throw ParseError(lineno, "duplicate choice for " + from_toks[0]);
    sit.choice[from] = to;
  }
  for (int v : game.internals())
    if (sit.choice[v] < 0)
      throw ParseError(0, "missing choice for " + game.name(v));
  return sit;
}

std::string print_situation(const Game& game, const Situation& sit) {
  validate_situation(game, sit);
  std::ostringstream out;
  for (int v : game.internals())
    out << game.name(v) << " -> " << game.name(sit.choice[v]) << "\n";
  return out.str();
}

std::string print_situation_line(const Game& game, const Situation& sit) {
  validate_situation(game, sit);
  std::ostringstream out;
  bool first = true;
  for (int v : game.internals()) {
    out << (first ? "" : " ") << game.name(v) << "->" << game.name(sit.choice[v]);
    first = false;
  }
  return out.str();
}

std::string export_dot(const Game& game, const Situation* sit) {
  if (sit) validate_situation(game, *sit);
  std::ostringstream out;
  out << "digraph game {\n";
  for (int t : game.terminals())
    out << "  " << game.name(t) << " [shape=box];\n";
  for (int v : game.internals())
    out << "  " << game.name(v) << " [label=\"" << game.name(v) << "/"
        << game.controller(v) << "\"];\n";
  for (int v : game.internals())
    for (int w : game.successors(v)) {
      out << "  " << game.name(v) << " -> " << game.name(w);
      if (sit && sit->choice[v] == w) out << " [style=bold]";
      out << ";\n";
    }
  out << "}\n";
  return out.str();
}

}  // namespace dgg
