// Acceptance gate for the solver library and CLI. Runs the frozen CLI
// checks and the property suites, printing one PASS/FAIL line each.
// Usage: dgg_acceptance <path-to-cli> <path-to-data-dir>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dgg/game.hpp"
#include "dgg/harness.hpp"
#include "dgg/io.hpp"
#include "dgg/oracle.hpp"
#include "dgg/play_once.hpp"
#include "dgg/terminal3.hpp"

using namespace dgg;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << ": " << name;
  if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++g_failures;
}

struct CliRun {
  int exit_code = -1;
  std::string out;
  double seconds = 0.0;
};

CliRun run_cli(const std::string& command) {
  CliRun run;
  auto start = std::chrono::steady_clock::now();
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return run;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) run.out.append(buf, got);
  int status = pclose(pipe);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
  if (WIFEXITED(status)) run.exit_code = WEXITSTATUS(status);
  return run;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// acyclicity of an explicit arc list by repeatedly removing sinks
bool arcs_acyclic(const std::vector<int>& verts,
                  const std::vector<std::pair<int, int>>& arcs) {
  std::map<int, int> out_deg;
  for (int v : verts) out_deg[v] = 0;
  std::map<int, std::vector<int>> preds;
  for (auto& a : arcs) {
    ++out_deg[a.first];
    preds[a.second].push_back(a.first);
  }
  std::vector<int> stack;
  for (auto& [v, d] : out_deg)
    if (d == 0) stack.push_back(v);
  size_t removed = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++removed;
    for (int p : preds[v])
      if (--out_deg[p] == 0) stack.push_back(p);
  }
  return removed == verts.size();
}

// Arcs of the game restricted to everything outside cycle_bound, minus the
// cut; used to confirm the feedback cut is exactly inclusion-minimal.
bool cut_leaves_acyclic(const Game& g, const Regions& regions,
                        const std::vector<std::pair<int, int>>& cut) {
  std::vector<char> keep(static_cast<size_t>(g.position_count()), 1);
  for (int v : regions.cycle_bound) keep[static_cast<size_t>(v)] = 0;
  std::vector<int> verts;
  for (int v = 0; v < g.position_count(); ++v)
    if (keep[static_cast<size_t>(v)]) verts.push_back(v);
  std::vector<std::pair<int, int>> arcs;
  for (int v : g.internals()) {
    if (!keep[static_cast<size_t>(v)]) continue;
    for (int w : g.successors(v)) {
      if (!keep[static_cast<size_t>(w)]) continue;
      bool is_cut = false;
      for (auto& c : cut) is_cut = is_cut || (c.first == v && c.second == w);
      if (!is_cut) arcs.emplace_back(v, w);
    }
  }
  return arcs_acyclic(verts, arcs);
}

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

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: dgg_acceptance <cli> <data-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::string data = argv[2];

  {  // 1: the 16-situation scan proves fig1 has no equilibrium
    CliRun r = run_cli(cli + " certify " + data + "/fig1.dgg");
    bool ok = r.exit_code == 1 &&
              r.out == "NE-free (16 situations examined)\n" && r.seconds < 1.0;
    report("certify fig1 reports NE-free over 16 situations", ok,
           "exit " + std::to_string(r.exit_code) + ", " + std::to_string(r.seconds) +
               "s, got: " + r.out);
  }

  {  // 2: fig2 has no terminal equilibrium, only the endless 3-cycle
    CliRun r = run_cli(cli + " certify " + data + "/fig2.dgg --all");
    bool ok = r.exit_code == 0 && contains(r.out, "8 situations examined") &&
              contains(r.out, "terminal NE: 0") &&
              contains(r.out, "non-terminal NE: 1") &&
              contains(r.out, "NE outcome inf: q1->q2 q2->q3 q3->q1") &&
              r.seconds < 1.0;
    report("certify fig2 --all finds exactly the endless 3-cycle equilibrium",
           ok, "exit " + std::to_string(r.exit_code) + ", got: " + r.out);
  }

  bool feedback_ok = true;  // part of line 6, gathered during line 3's suite
  int feedback_checked = 0;
  {  // 3: play-once construction, cross-checked by the oracle when small
    auto t0 = std::chrono::steady_clock::now();
    bool solved = true, confirmed = true;
    int oracle_checked = 0;
    std::string detail;
    try {
      for (std::uint64_t seed = 1; seed <= 2000; ++seed) {
        GenParams p = play_once_params(seed, 8);
        Game g = random_game(p);
        Situation sit = solve_play_once(g);
        if (!check_ne(g, sit).is_ne) solved = false;
        if (p.positions <= 6) {
          if (!certify(g, false).has_ne()) confirmed = false;
          ++oracle_checked;
        }

        // line 6 part: the feedback cut is inclusion-minimal. A cut is only
        // computed on the acyclic-start-region branch, as in the solver.
        Normalized norm = normalize_play_once(g);
        if (!norm.init_absorbed) {
          Regions regions = partition(norm.game);
          if (start_region_has_cycle(norm.game, regions)) continue;
          auto cut = minimal_feedback_arcs(norm.game, regions);
          if (!cut_leaves_acyclic(norm.game, regions, cut)) feedback_ok = false;
          for (size_t k = 0; k < cut.size(); ++k) {
            std::vector<std::pair<int, int>> smaller = cut;
            smaller.erase(smaller.begin() + static_cast<long>(k));
            if (cut_leaves_acyclic(norm.game, regions, smaller))
              feedback_ok = false;  // this arc was never needed
          }
          feedback_checked += static_cast<int>(cut.size());
        }
      }
    } catch (const std::exception& e) {
      solved = false;
      detail = e.what();
    }
    double took = seconds_since(t0);
    bool ok = solved && confirmed && oracle_checked > 500 && took < 60.0;
    report("play-once solver verified on 2000 random games", ok,
           detail.empty() ? std::to_string(took) + "s" : detail);
  }

  bool lifts_ok = true;  // part of line 6, gathered during line 4's suite
  {  // 4: terminal games with at most three terminals always solve
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    SolveStats totals;
    try {
      for (std::uint64_t seed = 1; seed <= 2000; ++seed) {
        GenParams p;
        p.positions = 3 + static_cast<int>(seed % 6);
        p.terminals = 1 + static_cast<int>(seed % 3);
        p.players = 1 + static_cast<int>((seed / 3) % 3);
        p.max_out_degree = 2 + static_cast<int>(seed % 2);
        p.force_terminal_game = true;
        p.seed = seed;
        Game g = random_game(p);
        Terminal3Result res = solve_terminal3(g);
        if (!check_ne(g, res.situation).is_ne) ok = false;
        if (classify(g).terminal_reachable && !res.outcome.is_terminal())
          ok = false;
        totals.reductions += res.stats.reductions;
        totals.lift_failures += res.stats.lift_failures;
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    double took = seconds_since(t0);
    ok = ok && took < 120.0;
    lifts_ok = totals.lift_failures == 0 && totals.reductions > 0;
    report("three-terminal solver verified on 2000 random terminal games", ok,
           detail.empty() ? std::to_string(took) + "s" : detail);
  }

  {  // 5: endless equilibrium iff the normalized start region is cyclic
    bool ok = true;
    int with = 0, without = 0;
    std::string detail;
    try {
      for (std::uint64_t seed = 1; seed <= 400; ++seed) {
        GenParams p = play_once_params(seed, 6);
        Game g = random_game(p);
        bool endless_ne = !certify(g, true).other_nes.empty();
        Normalized norm = normalize_play_once(g);
        bool structural =
            !norm.init_absorbed &&
            start_region_has_cycle(norm.game, partition(norm.game));
        if (endless_ne != structural) ok = false;
        (endless_ne ? with : without)++;
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    ok = ok && with > 0 && without > 0;
    report("endless equilibrium exists iff the normalized start region has a cycle",
           ok, detail);
  }

  {  // 6: switching transform across 500 equilibria, plus the parts above
    bool ok = true;
    int transformed = 0;
    std::string detail;
    try {
      for (std::uint64_t seed = 1; transformed < 500 && seed <= 20000; ++seed) {
        GenParams p;
        p.positions = 3 + static_cast<int>(seed % 4);
        p.terminals = 2 + static_cast<int>(seed % 2);
        p.players = 1 + static_cast<int>((seed / 2) % 3);
        p.max_out_degree = 2 + static_cast<int>(seed % 2);
        p.force_terminal_game = true;
        p.seed = seed;
        Game g = random_game(p);
        Certificate cert = certify(g, true);
        for (const Situation& sigma : cert.terminal_nes) {
          Outcome before = evaluate(g, sigma).outcome;
          Situation after;
          try {
            after = switching_transform(g, sigma);
          } catch (const ValidationError&) {
            continue;  // precondition unmet for this equilibrium
          }
          if (!check_ne(g, after).is_ne) ok = false;
          if (evaluate(g, after).outcome != before) ok = false;
          if (++transformed >= 500) break;
        }
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    ok = ok && transformed >= 500 && lifts_ok && feedback_ok &&
         feedback_checked > 0;
    if (detail.empty())
      detail = "transformed " + std::to_string(transformed) + ", lifts " +
               (lifts_ok ? "ok" : "failed") + ", feedback " +
               (feedback_ok ? "ok" : "failed");
    report("switching transform, lift checks and minimal feedback cuts hold",
           ok, detail);
  }

  {  // 7: backward induction values replay exactly
    bool ok = true;
    std::string detail;
    try {
      for (std::uint64_t seed = 1; seed <= 500; ++seed) {
        GenParams p;
        p.positions = 3 + static_cast<int>(seed % 6);
        p.terminals = 1 + static_cast<int>(seed % 3);
        p.players = 1 + static_cast<int>(seed % 3);
        p.max_out_degree = 2 + static_cast<int>(seed % 2);
        p.seed = seed;
        Game g = random_acyclic_game(p);
        BackwardInductionResult bi = backward_induction(g);
        if (!check_ne(g, bi.situation).is_ne) ok = false;
        for (int v = 0; v < g.position_count(); ++v)
          if (bi.value[static_cast<size_t>(v)] !=
              evaluate(g, bi.situation, v).outcome)
            ok = false;
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    report("backward induction verified on 500 acyclic games", ok, detail);
  }

  {  // 8: terminals cut off from the start still leave an equilibrium
    bool ok = true;
    std::string detail;
    try {
      for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        GenParams p;
        p.positions = 3 + static_cast<int>(seed % 6);
        p.terminals = 1 + static_cast<int>(seed % 3);
        p.players = 1 + static_cast<int>(seed % 3);
        p.seed = seed;
        Game g = random_terminal_unreachable_game(p);
        Situation sit = solve_unreachable(g);
        if (!check_ne(g, sit).is_ne) ok = false;
        if (evaluate(g, sit).outcome.is_terminal()) ok = false;
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    report("confined equilibrium verified on 200 cut-off terminal games", ok,
           detail);
  }

  return g_failures == 0 ? 0 : 1;
}
