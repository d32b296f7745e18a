// Command-line front end. Talks to the solver library exclusively through
// the C interface in dgg.h.
//
// Exit codes: 0 equilibrium found / verification passed; 1 certified absent
// or verification failed; 2 input error; 3 instance too large or method
// unsupported for the input.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dgg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitBig = 3;

void usage(std::FILE* to) {
  std::fputs(
      "usage: dgg COMMAND [ARGS]\n"
      "\n"
      "commands:\n"
      "  solve FILE [--method auto|playonce|terminal3|terminal-playonce|oracle]\n"
      "             [--require-terminal]\n"
      "  check FILE --situation SITFILE\n"
      "  certify FILE [--all]\n"
      "  enumerate FILE [--count-only]\n"
      "  dynamics FILE [--start SITFILE] [--max-steps N]   (default 1000)\n"
      "  gen [--positions N] [--terminals N] [--players N] [--max-out-degree N]\n"
      "      [--seed S] [--play-once] [--terminal-game] [--reachable]\n"
      "      [--acyclic] [--unreachable]\n"
      "  search [--trials N] [gen options]      (terminal games, counts\n"
      "                                          equilibrium-free hits)\n"
      "  export-dot FILE [--situation SITFILE]\n",
      to);
}

[[noreturn]] void die_input(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  std::exit(kExitInput);
}

// Library failures: parse/validation problems are input errors, blown
// enumeration limits map to the too-large exit code.
[[noreturn]] void die_lib(int code) {
  std::fprintf(stderr, "error: %s\n", dgg_last_error());
  std::exit(code == DGG_ERR_TOO_LARGE ? kExitBig : kExitInput);
}

void check(int code) {
  if (code != DGG_OK) die_lib(code);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die_input("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

dgg_game* load_game(const std::string& path) {
  std::string text = read_file(path);
  dgg_game* game = nullptr;
  int code = dgg_game_parse(text.c_str(), &game);
  if (code != DGG_OK) {
    std::fprintf(stderr, "error: %s: %s\n", path.c_str(), dgg_last_error());
    std::exit(code == DGG_ERR_TOO_LARGE ? kExitBig : kExitInput);
  }
  return game;
}

dgg_situation* load_situation(dgg_game* game, const std::string& path) {
  std::string text = read_file(path);
  dgg_situation* sit = nullptr;
  int code = dgg_situation_parse(game, text.c_str(), &sit);
  if (code != DGG_OK) {
    std::fprintf(stderr, "error: %s: %s\n", path.c_str(), dgg_last_error());
    std::exit(kExitInput);
  }
  return sit;
}

void print_owned(char* text) {
  std::fputs(text, stdout);
  dgg_string_free(text);
}

void print_situation(dgg_game* game, const dgg_situation* sit) {
  char* text = nullptr;
  check(dgg_situation_print(game, sit, &text));
  print_owned(text);
}

// One-line "a->b c->d" rendering for list output.
std::string situation_line(dgg_game* game, const dgg_situation* sit) {
  char* text = nullptr;
  check(dgg_situation_print(game, sit, &text));
  std::string line;
  for (const char* p = text; *p; ++p) {
    if (*p == '\n') {
      if (p[1]) line += ' ';
    } else if (std::strncmp(p, " -> ", 4) == 0) {
      line += "->";
      p += 3;
    } else {
      line += *p;
    }
  }
  dgg_string_free(text);
  return line;
}

const char* method_name(int method) {
  switch (method) {
    case DGG_METHOD_PLAYONCE:
      return "playonce";
    case DGG_METHOD_TERMINAL3:
      return "terminal3";
    case DGG_METHOD_TERMINAL_PLAYONCE:
      return "terminal-playonce";
    case DGG_METHOD_ORACLE:
      return "oracle";
    default:
      return "auto";
  }
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    die_input("bad " + what + ": " + text);
  }
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    unsigned long long value = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    die_input("bad " + what + ": " + text);
  }
}

std::string need_value(const std::vector<std::string>& args, size_t& i) {
  if (i + 1 >= args.size()) die_input("missing value after " + args[i]);
  return args[++i];
}

int cmd_solve(const std::vector<std::string>& args) {
  std::string file;
  int method = DGG_METHOD_AUTO;
  int require_terminal = 0;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--method") {
      std::string m = need_value(args, i);
      if (m == "auto")
        method = DGG_METHOD_AUTO;
      else if (m == "playonce")
        method = DGG_METHOD_PLAYONCE;
      else if (m == "terminal3")
        method = DGG_METHOD_TERMINAL3;
      else if (m == "terminal-playonce")
        method = DGG_METHOD_TERMINAL_PLAYONCE;
      else if (m == "oracle")
        method = DGG_METHOD_ORACLE;
      else
        die_input("unknown method " + m);
    } else if (args[i] == "--require-terminal") {
      require_terminal = 1;
    } else if (file.empty()) {
      file = args[i];
    } else {
      die_input("unexpected argument " + args[i]);
    }
  }
  if (file.empty()) die_input("solve needs a game file");

  dgg_game* game = load_game(file);
  dgg_solve_result* res = nullptr;
  check(dgg_solve(game, method, require_terminal, &res));
  int status = dgg_solve_status(res);
  if (status == DGG_SOLVE_UNSUPPORTED) {
    std::printf("status: UNSUPPORTED\nmethod: %s\n",
                method_name(dgg_solve_method(res)));
    return kExitBig;
  }
  if (status == DGG_SOLVE_NO_NE) {
    std::printf("status: NO-NE\nmethod: %s\n",
                method_name(dgg_solve_method(res)));
    return kExitFail;
  }
  dgg_situation* sit = nullptr;
  check(dgg_solve_situation(res, &sit));
  char* outcome = nullptr;
  char* play = nullptr;
  check(dgg_evaluate(game, sit, &outcome, &play));
  std::printf("status: NE\nmethod: %s\noutcome: %s\nplay: %s\nsituation:\n",
              method_name(dgg_solve_method(res)), outcome, play);
  print_situation(game, sit);
  dgg_string_free(outcome);
  dgg_string_free(play);
  dgg_situation_free(sit);
  dgg_solve_result_free(res);
  dgg_game_free(game);
  return kExitOk;
}

int cmd_check(const std::vector<std::string>& args) {
  std::string file, sitfile;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--situation")
      sitfile = need_value(args, i);
    else if (file.empty())
      file = args[i];
    else
      die_input("unexpected argument " + args[i]);
  }
  if (file.empty()) die_input("check needs a game file");
  if (sitfile.empty()) die_input("check needs --situation");

  dgg_game* game = load_game(file);
  dgg_situation* sit = load_situation(game, sitfile);
  int is_ne = 0, player = 0;
  dgg_situation* witness = nullptr;
  char* outcome = nullptr;
  check(dgg_check_ne(game, sit, &is_ne, &player, &witness, &outcome));
  if (is_ne) {
    std::printf("NE\n");
    return kExitOk;
  }
  std::printf("not-NE\nplayer: %d\noutcome: %s\nsituation:\n", player, outcome);
  print_situation(game, witness);
  dgg_string_free(outcome);
  dgg_situation_free(witness);
  dgg_situation_free(sit);
  dgg_game_free(game);
  return kExitFail;
}

int cmd_certify(const std::vector<std::string>& args) {
  std::string file;
  int want_all = 0;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--all")
      want_all = 1;
    else if (file.empty())
      file = args[i];
    else
      die_input("unexpected argument " + args[i]);
  }
  if (file.empty()) die_input("certify needs a game file");

  dgg_game* game = load_game(file);
  dgg_certificate* cert = nullptr;
  check(dgg_certify(game, want_all, &cert));
  std::uint64_t examined = 0, tcount = 0, ocount = 0;
  check(dgg_certificate_examined(cert, &examined));
  check(dgg_certificate_terminal_ne_count(cert, &tcount));
  check(dgg_certificate_other_ne_count(cert, &ocount));

  int exit_code = kExitOk;
  if (!want_all) {
    if (tcount + ocount == 0) {
      std::printf("NE-free (%" PRIu64 " situations examined)\n", examined);
      exit_code = kExitFail;
    } else {
      dgg_situation* sit = nullptr;
      check(tcount ? dgg_certificate_terminal_ne(cert, 0, &sit)
                   : dgg_certificate_other_ne(cert, 0, &sit));
      char* outcome = nullptr;
      check(dgg_evaluate(game, sit, &outcome, nullptr));
      std::printf("NE found (%" PRIu64 " situations examined)\noutcome: %s\nsituation:\n",
                  examined, outcome);
      print_situation(game, sit);
      dgg_string_free(outcome);
      dgg_situation_free(sit);
    }
  } else {
    std::printf("%" PRIu64 " situations examined\nterminal NE: %" PRIu64
                "\nnon-terminal NE: %" PRIu64 "\n",
                examined, tcount, ocount);
    for (std::uint64_t k = 0; k < tcount; ++k) {
      dgg_situation* sit = nullptr;
      check(dgg_certificate_terminal_ne(cert, k, &sit));
      char* outcome = nullptr;
      check(dgg_evaluate(game, sit, &outcome, nullptr));
      std::printf("NE outcome %s: %s\n", outcome,
                  situation_line(game, sit).c_str());
      dgg_string_free(outcome);
      dgg_situation_free(sit);
    }
    for (std::uint64_t k = 0; k < ocount; ++k) {
      dgg_situation* sit = nullptr;
      check(dgg_certificate_other_ne(cert, k, &sit));
      std::printf("NE outcome inf: %s\n", situation_line(game, sit).c_str());
      dgg_situation_free(sit);
    }
    if (tcount + ocount == 0) exit_code = kExitFail;
  }
  dgg_certificate_free(cert);
  dgg_game_free(game);
  return exit_code;
}

int cmd_enumerate(const std::vector<std::string>& args) {
  std::string file;
  int count_only = 0;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--count-only")
      count_only = 1;
    else if (file.empty())
      file = args[i];
    else
      die_input("unexpected argument " + args[i]);
  }
  if (file.empty()) die_input("enumerate needs a game file");

  dgg_game* game = load_game(file);
  std::uint64_t count = 0;
  check(dgg_game_situation_count(game, &count));
  if (count_only) {
    std::printf("%" PRIu64 "\n", count);
  } else {
    for (std::uint64_t k = 0; k < count; ++k) {
      dgg_situation* sit = nullptr;
      check(dgg_situation_at(game, k, &sit));
      std::printf("%" PRIu64 ": %s\n", k, situation_line(game, sit).c_str());
      dgg_situation_free(sit);
    }
  }
  dgg_game_free(game);
  return kExitOk;
}

int cmd_dynamics(const std::vector<std::string>& args) {
  std::string file, sitfile;
  int max_steps = 1000;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--start")
      sitfile = need_value(args, i);
    else if (args[i] == "--max-steps")
      max_steps = parse_int(need_value(args, i), "--max-steps");
    else if (file.empty())
      file = args[i];
    else
      die_input("unexpected argument " + args[i]);
  }
  if (file.empty()) die_input("dynamics needs a game file");

  dgg_game* game = load_game(file);
  dgg_situation* start = sitfile.empty() ? nullptr : load_situation(game, sitfile);
  dgg_dynamics_run* run = nullptr;
  check(dgg_dynamics(game, start, max_steps, &run));
  int steps = dgg_dynamics_step_count(run);
  for (int k = 0; k < steps; ++k) {
    int player = 0;
    dgg_situation* sit = nullptr;
    check(dgg_dynamics_step(run, k, &player, &sit));
    std::printf("step %d: player %d: %s\n", k + 1, player,
                situation_line(game, sit).c_str());
    dgg_situation_free(sit);
  }
  int end = dgg_dynamics_end(run);
  if (end == DGG_DYNAMICS_REACHED_NE)
    std::printf("end: reached-ne\n");
  else if (end == DGG_DYNAMICS_CYCLE)
    std::printf("end: improvement-cycle\ncycle-start: %d\n",
                dgg_dynamics_cycle_start(run));
  else
    std::printf("end: step-limit\n");
  std::printf("steps: %d\n", steps);
  dgg_dynamics_free(run);
  if (start) dgg_situation_free(start);
  dgg_game_free(game);
  return end == DGG_DYNAMICS_REACHED_NE ? kExitOk : kExitFail;
}

struct GenArgs {
  dgg_gen_params params;
  bool acyclic = false;
  bool unreachable = false;
};

// shared between gen and search; returns indices it consumed
bool eat_gen_arg(const std::vector<std::string>& args, size_t& i, GenArgs& gen) {
  if (args[i] == "--positions")
    gen.params.positions = parse_int(need_value(args, i), "--positions");
  else if (args[i] == "--terminals")
    gen.params.terminals = parse_int(need_value(args, i), "--terminals");
  else if (args[i] == "--players")
    gen.params.players = parse_int(need_value(args, i), "--players");
  else if (args[i] == "--max-out-degree")
    gen.params.max_out_degree =
        parse_int(need_value(args, i), "--max-out-degree");
  else if (args[i] == "--seed")
    gen.params.seed = parse_u64(need_value(args, i), "--seed");
  else if (args[i] == "--play-once")
    gen.params.force_play_once = 1;
  else if (args[i] == "--terminal-game")
    gen.params.force_terminal_game = 1;
  else if (args[i] == "--reachable")
    gen.params.force_terminal_reachable = 1;
  else if (args[i] == "--acyclic")
    gen.acyclic = true;
  else if (args[i] == "--unreachable")
    gen.unreachable = true;
  else
    return false;
  return true;
}

int cmd_gen(const std::vector<std::string>& args) {
  GenArgs gen;
  dgg_gen_params_init(&gen.params);
  for (size_t i = 0; i < args.size(); ++i)
    if (!eat_gen_arg(args, i, gen)) die_input("unexpected argument " + args[i]);
  if (gen.acyclic && gen.unreachable)
    die_input("--acyclic and --unreachable are exclusive");

  dgg_game* game = nullptr;
  int code = gen.acyclic ? dgg_game_random_acyclic(&gen.params, &game)
             : gen.unreachable
                 ? dgg_game_random_unreachable(&gen.params, &game)
                 : dgg_game_random(&gen.params, &game);
  if (code != DGG_OK) die_lib(code);
  char* text = nullptr;
  check(dgg_game_print(game, &text));
  print_owned(text);
  dgg_game_free(game);
  return kExitOk;
}

void search_progress(std::uint64_t done, std::uint64_t total, void*) {
  std::fprintf(stderr, "searched %" PRIu64 "/%" PRIu64 "\n", done, total);
}

int cmd_search(const std::vector<std::string>& args) {
  GenArgs gen;
  dgg_gen_params_init(&gen.params);
  std::uint64_t trials = 100;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--trials")
      trials = parse_u64(need_value(args, i), "--trials");
    else if (!eat_gen_arg(args, i, gen))
      die_input("unexpected argument " + args[i]);
  }
  if (gen.acyclic || gen.unreachable)
    die_input("search draws from the general generator only");
  gen.params.force_terminal_game = 1;  // the hunt only makes sense there

  dgg_search_results* res = nullptr;
  int code =
      dgg_search_ne_free(&gen.params, trials, search_progress, nullptr, &res);
  if (code != DGG_OK) die_lib(code);
  std::uint64_t hits = 0;
  check(dgg_search_hit_count(res, &hits));
  std::printf("trials: %" PRIu64 "\nhits: %" PRIu64 "\n", trials, hits);
  for (std::uint64_t k = 0; k < hits; ++k) {
    std::uint64_t seed = 0;
    check(dgg_search_hit_seed(res, k, &seed));
    std::printf("hit seed: %" PRIu64 "\n", seed);
  }
  dgg_search_results_free(res);
  return kExitOk;
}

int cmd_export_dot(const std::vector<std::string>& args) {
  std::string file, sitfile;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--situation")
      sitfile = need_value(args, i);
    else if (file.empty())
      file = args[i];
    else
      die_input("unexpected argument " + args[i]);
  }
  if (file.empty()) die_input("export-dot needs a game file");

  dgg_game* game = load_game(file);
  dgg_situation* sit = sitfile.empty() ? nullptr : load_situation(game, sitfile);
  char* text = nullptr;
  check(dgg_game_dot(game, sit, &text));
  print_owned(text);
  if (sit) dgg_situation_free(sit);
  dgg_game_free(game);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage(stderr);
    return kExitInput;
  }
  std::string cmd = argv[1];
  std::vector<std::string> args(argv + 2, argv + argc);
  if (cmd == "solve") return cmd_solve(args);
  if (cmd == "check") return cmd_check(args);
  if (cmd == "certify") return cmd_certify(args);
  if (cmd == "enumerate") return cmd_enumerate(args);
  if (cmd == "dynamics") return cmd_dynamics(args);
  if (cmd == "gen") return cmd_gen(args);
  if (cmd == "search") return cmd_search(args);
  if (cmd == "export-dot") return cmd_export_dot(args);
  if (cmd == "--help" || cmd == "help") {
    usage(stdout);
    return kExitOk;
  }
  std::fprintf(stderr, "error: unknown command %s\n", cmd.c_str());
  usage(stderr);
  return kExitInput;
}
