#include "dgg.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "dgg/game.hpp"
#include "dgg/harness.hpp"
#include "dgg/io.hpp"
#include "dgg/oracle.hpp"
#include "dgg/play_once.hpp"
#include "dgg/terminal3.hpp"

struct dgg_game {
  dgg::Game g;
};
struct dgg_situation {
  dgg::Situation s;
};
struct dgg_certificate {
  dgg::Certificate c;
};
struct dgg_dynamics_run {
  dgg::DynamicsRun r;
};
struct dgg_solve_result {
  int status = DGG_SOLVE_NE;
  int method = DGG_METHOD_ORACLE;
  bool has_sit = false;
  dgg::Situation sit;
  dgg::SolveStats stats;
};
struct dgg_search_results {
  std::vector<dgg::SearchHit> hits;
};

namespace {

thread_local std::string t_error;

int fail(int code, const std::string& msg) {
  t_error = msg;
  return code;
}

// Central exception-to-error-code mapping; the callable does the real work
// and returns a code itself (usually DGG_OK).
template <class F>
int wrap(F&& body) {
  try {
    return body();
  } catch (const dgg::TooLargeError& e) {
    return fail(DGG_ERR_TOO_LARGE, e.what());
  } catch (const dgg::ParseError& e) {
    return fail(DGG_ERR_PARSE, e.what());
  } catch (const dgg::ValidationError& e) {
    return fail(DGG_ERR_VALIDATION, e.what());
  } catch (const std::exception& e) {
    return fail(DGG_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string outcome_text(const dgg::Game& g, dgg::Outcome o) {
  return o.is_terminal() ? g.name(o.terminal) : "inf";
}

dgg::GenParams to_params(const dgg_gen_params* p) {
  dgg::GenParams q;
  q.positions = p->positions;
  q.terminals = p->terminals;
  q.players = p->players;
  q.max_out_degree = p->max_out_degree;
  q.force_play_once = p->force_play_once != 0;
  q.force_terminal_game = p->force_terminal_game != 0;
  q.force_terminal_reachable = p->force_terminal_reachable != 0;
  q.seed = p->seed;
  return q;
}

}  // namespace

const char* dgg_version(void) { return "1.0.0"; }

const char* dgg_last_error(void) { return t_error.c_str(); }

void dgg_string_free(char* s) { std::free(s); }

int dgg_game_parse(const char* text, dgg_game** out) {
  if (!text || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    auto handle = std::make_unique<dgg_game>(dgg_game{dgg::parse_game(text)});
    *out = handle.release();
    return DGG_OK;
  });
}

int dgg_game_fixture(const char* name, dgg_game** out) {
  if (!name || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    auto handle = std::make_unique<dgg_game>(dgg_game{dgg::fixture(name)});
    *out = handle.release();
    return DGG_OK;
  });
}

void dgg_game_free(dgg_game* game) { delete game; }

int dgg_game_print(const dgg_game* game, char** out) {
  if (!game || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    *out = dup_string(dgg::print_game(game->g));
    return DGG_OK;
  });
}

int dgg_game_dot(const dgg_game* game, const dgg_situation* sit, char** out) {
  if (!game || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    *out = dup_string(dgg::export_dot(game->g, sit ? &sit->s : nullptr));
    return DGG_OK;
  });
}

int dgg_game_players(const dgg_game* game) {
  return game ? game->g.player_count() : 0;
}

int dgg_game_positions(const dgg_game* game) {
  return game ? game->g.position_count() : 0;
}

int dgg_game_internals(const dgg_game* game) {
  return game ? game->g.internal_count() : 0;
}

int dgg_game_terminals(const dgg_game* game) {
  return game ? game->g.terminal_count() : 0;
}

int dgg_game_classify(const dgg_game* game, int* terminal_game, int* play_once,
                      int* terminal_reachable) {
  if (!game) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  dgg::GameClass cls = dgg::classify(game->g);
  if (terminal_game) *terminal_game = cls.terminal_game ? 1 : 0;
  if (play_once) *play_once = cls.play_once ? 1 : 0;
  if (terminal_reachable) *terminal_reachable = cls.terminal_reachable ? 1 : 0;
  return DGG_OK;
}

int dgg_game_situation_count(const dgg_game* game, uint64_t* out) {
  if (!game || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    *out = dgg::situation_count(game->g);
    return DGG_OK;
  });
}

void dgg_gen_params_init(dgg_gen_params* params) {
  if (!params) return;
  dgg::GenParams d;
  params->positions = d.positions;
  params->terminals = d.terminals;
  params->players = d.players;
  params->max_out_degree = d.max_out_degree;
  params->force_play_once = d.force_play_once ? 1 : 0;
  params->force_terminal_game = d.force_terminal_game ? 1 : 0;
  params->force_terminal_reachable = d.force_terminal_reachable ? 1 : 0;
  params->seed = d.seed;
}

int dgg_game_random(const dgg_gen_params* params, dgg_game** out) {
  if (!params || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    auto handle =
        std::make_unique<dgg_game>(dgg_game{dgg::random_game(to_params(params))});
    *out = handle.release();
    return DGG_OK;
  });
}

int dgg_game_random_acyclic(const dgg_gen_params* params, dgg_game** out) {
  if (!params || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    auto handle = std::make_unique<dgg_game>(
        dgg_game{dgg::random_acyclic_game(to_params(params))});
    *out = handle.release();
    return DGG_OK;
  });
}

int dgg_game_random_unreachable(const dgg_gen_params* params, dgg_game** out) {
  if (!params || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    auto handle = std::make_unique<dgg_game>(
        dgg_game{dgg::random_terminal_unreachable_game(to_params(params))});
    *out = handle.release();
    return DGG_OK;
  });
}

int dgg_situation_parse(const dgg_game* game, const char* text,
                        dgg_situation** out) {
  if (!game || !text || !out)
    return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    auto handle = std::make_unique<dgg_situation>(
        dgg_situation{dgg::parse_situation(game->g, text)});
    *out = handle.release();
    return DGG_OK;
  });
}

int dgg_situation_at(const dgg_game* game, uint64_t index, dgg_situation** out) {
  if (!game || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    auto handle = std::make_unique<dgg_situation>(
        dgg_situation{dgg::situation_at(game->g, index)});
    *out = handle.release();
    return DGG_OK;
  });
}

int dgg_situation_index(const dgg_game* game, const dgg_situation* sit,
                        uint64_t* out) {
  if (!game || !sit || !out)
    return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    *out = dgg::situation_index(game->g, sit->s);
    return DGG_OK;
  });
}

int dgg_situation_print(const dgg_game* game, const dgg_situation* sit,
                        char** out) {
  if (!game || !sit || !out)
    return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    *out = dup_string(dgg::print_situation(game->g, sit->s));
    return DGG_OK;
  });
}

void dgg_situation_free(dgg_situation* sit) { delete sit; }

int dgg_evaluate(const dgg_game* game, const dgg_situation* sit, char** outcome,
                 char** play) {
  if (!game || !sit) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    dgg::Play p = dgg::evaluate(game->g, sit->s);
    if (outcome) *outcome = dup_string(outcome_text(game->g, p.outcome));
    if (play) {
      std::string text;
      for (int v : p.walk) {
        if (!text.empty()) text += ' ';
        text += game->g.name(v);
      }
      *play = dup_string(text);
    }
    return DGG_OK;
  });
}

int dgg_check_ne(const dgg_game* game, const dgg_situation* sit, int* is_ne,
                 int* witness_player, dgg_situation** witness_sit,
                 char** witness_outcome) {
  if (!game || !sit || !is_ne)
    return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    dgg::NeVerdict verdict = dgg::check_ne(game->g, sit->s);
    *is_ne = verdict.is_ne ? 1 : 0;
    if (witness_player) *witness_player = 0;
    if (!verdict.is_ne && verdict.witness) {
      if (witness_player) *witness_player = verdict.witness->player;
      if (witness_sit)
        *witness_sit = std::make_unique<dgg_situation>(
                           dgg_situation{verdict.witness->situation})
                           .release();
      if (witness_outcome)
        *witness_outcome =
            dup_string(outcome_text(game->g, verdict.witness->outcome));
    }
    return DGG_OK;
  });
}

int dgg_solve(const dgg_game* game, int method, int require_terminal,
              dgg_solve_result** out) {
  if (!game || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  if (method < DGG_METHOD_AUTO || method > DGG_METHOD_ORACLE)
    return fail(DGG_ERR_INVALID_ARGUMENT, "unknown solve method");
  return wrap([&] {
    const dgg::Game& g = game->g;
    dgg::GameClass cls = dgg::classify(g);
    int resolved = method;
    if (method == DGG_METHOD_AUTO) {
      if (cls.terminal_game && cls.play_once && cls.terminal_reachable)
        resolved = DGG_METHOD_TERMINAL_PLAYONCE;
      else if (cls.play_once)
        resolved = DGG_METHOD_PLAYONCE;
      else if (cls.terminal_game && g.terminal_count() <= 3)
        resolved = DGG_METHOD_TERMINAL3;
      else
        resolved = DGG_METHOD_ORACLE;
    }

    auto res = std::make_unique<dgg_solve_result>();
    res->method = resolved;
    switch (resolved) {
      case DGG_METHOD_PLAYONCE:
        if (!cls.play_once) {
          res->status = DGG_SOLVE_UNSUPPORTED;
          break;
        }
        res->sit = dgg::solve_play_once(g);
        res->has_sit = true;
        break;
      case DGG_METHOD_TERMINAL_PLAYONCE:
        if (!cls.terminal_game || !cls.play_once || !cls.terminal_reachable) {
          res->status = DGG_SOLVE_UNSUPPORTED;
          break;
        }
        res->sit = dgg::solve_terminal_play_once(g);
        res->has_sit = true;
        break;
      case DGG_METHOD_TERMINAL3:
        try {
          dgg::Terminal3Result t = dgg::solve_terminal3(g);
          res->sit = std::move(t.situation);
          res->stats = t.stats;
          res->has_sit = true;
        } catch (const dgg::NoEquilibriumError&) {
          res->status = DGG_SOLVE_NO_NE;
        }
        break;
      case DGG_METHOD_ORACLE: {
        dgg::Certificate cert = dgg::certify(g, require_terminal != 0);
        if (require_terminal) {
          if (cert.terminal_nes.empty()) {
            res->status = DGG_SOLVE_NO_NE;
          } else {
            res->sit = cert.terminal_nes.front();
            res->has_sit = true;
          }
        } else if (cert.has_ne()) {
          res->sit = cert.terminal_nes.empty() ? cert.other_nes.front()
                                               : cert.terminal_nes.front();
          res->has_sit = true;
        } else {
          res->status = DGG_SOLVE_NO_NE;
        }
        break;
      }
      default:
        return fail(DGG_ERR_INVALID_ARGUMENT, "method needs routing first");
    }

    if (res->status == DGG_SOLVE_NE && require_terminal && res->has_sit &&
        resolved != DGG_METHOD_ORACLE) {
      dgg::Outcome got = dgg::evaluate(g, res->sit).outcome;
      if (!got.is_terminal()) {
        if (resolved == DGG_METHOD_TERMINAL3 && cls.terminal_game &&
            g.terminal_count() <= 3) {
          // endless outcome from the reduction engine means no terminal is
          // reachable from init, so no terminal equilibrium can exist
          res->status = DGG_SOLVE_NO_NE;
          res->has_sit = false;
        } else {
          dgg::Certificate cert = dgg::certify(g, true);
          if (cert.terminal_nes.empty()) {
            res->status = DGG_SOLVE_NO_NE;
            res->has_sit = false;
          } else {
            res->sit = cert.terminal_nes.front();
          }
        }
      }
    }

    *out = res.release();
    return DGG_OK;
  });
}

int dgg_solve_status(const dgg_solve_result* res) {
  return res ? res->status : DGG_SOLVE_UNSUPPORTED;
}

int dgg_solve_method(const dgg_solve_result* res) {
  return res ? res->method : DGG_METHOD_AUTO;
}

int dgg_solve_situation(const dgg_solve_result* res, dgg_situation** out) {
  if (!res || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  if (!res->has_sit)
    return fail(DGG_ERR_INVALID_ARGUMENT, "result carries no situation");
  return wrap([&] {
    *out = std::make_unique<dgg_situation>(dgg_situation{res->sit}).release();
    return DGG_OK;
  });
}

int dgg_solve_stats(const dgg_solve_result* res, int* reductions, int* pinned,
                    int* bottlenecks, int* lift_failures,
                    int* oracle_fallbacks) {
  if (!res) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  if (reductions) *reductions = res->stats.reductions;
  if (pinned) *pinned = res->stats.pinned;
  if (bottlenecks) *bottlenecks = res->stats.bottlenecks;
  if (lift_failures) *lift_failures = res->stats.lift_failures;
  if (oracle_fallbacks) *oracle_fallbacks = res->stats.oracle_fallbacks;
  return DGG_OK;
}

void dgg_solve_result_free(dgg_solve_result* res) { delete res; }

int dgg_certify(const dgg_game* game, int want_all, dgg_certificate** out) {
  if (!game || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    auto handle = std::make_unique<dgg_certificate>(
        dgg_certificate{dgg::certify(game->g, want_all != 0)});
    *out = handle.release();
    return DGG_OK;
  });
}

int dgg_certificate_tag(const dgg_certificate* cert) {
  if (!cert) return DGG_CERT_NE_FREE;
  switch (cert->c.tag) {
    case dgg::Certificate::Tag::NeFree:
      return DGG_CERT_NE_FREE;
    case dgg::Certificate::Tag::HasNe:
      return DGG_CERT_HAS_NE;
    case dgg::Certificate::Tag::NoTerminalNe:
      return DGG_CERT_NO_TERMINAL_NE;
  }
  return DGG_CERT_NE_FREE;
}

int dgg_certificate_examined(const dgg_certificate* cert, uint64_t* out) {
  if (!cert || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  *out = cert->c.examined;
  return DGG_OK;
}

int dgg_certificate_terminal_ne_count(const dgg_certificate* cert,
                                      uint64_t* out) {
  if (!cert || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  *out = cert->c.terminal_nes.size();
  return DGG_OK;
}

int dgg_certificate_other_ne_count(const dgg_certificate* cert, uint64_t* out) {
  if (!cert || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  *out = cert->c.other_nes.size();
  return DGG_OK;
}

int dgg_certificate_terminal_ne(const dgg_certificate* cert, uint64_t index,
                                dgg_situation** out) {
  if (!cert || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  if (index >= cert->c.terminal_nes.size())
    return fail(DGG_ERR_INVALID_ARGUMENT, "equilibrium index out of range");
  return wrap([&] {
    *out = std::make_unique<dgg_situation>(
               dgg_situation{cert->c.terminal_nes[index]})
               .release();
    return DGG_OK;
  });
}

int dgg_certificate_other_ne(const dgg_certificate* cert, uint64_t index,
                             dgg_situation** out) {
  if (!cert || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  if (index >= cert->c.other_nes.size())
    return fail(DGG_ERR_INVALID_ARGUMENT, "equilibrium index out of range");
  return wrap([&] {
    *out =
        std::make_unique<dgg_situation>(dgg_situation{cert->c.other_nes[index]})
            .release();
    return DGG_OK;
  });
}

void dgg_certificate_free(dgg_certificate* cert) { delete cert; }

int dgg_dynamics(const dgg_game* game, const dgg_situation* start,
                 int max_steps, dgg_dynamics_run** out) {
  if (!game || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  if (max_steps < 0)
    return fail(DGG_ERR_INVALID_ARGUMENT, "negative step limit");
  return wrap([&] {
    dgg::Situation s0 =
        start ? start->s : dgg::situation_at(game->g, 0);
    auto handle = std::make_unique<dgg_dynamics_run>(
        dgg_dynamics_run{dgg::improvement_dynamics(game->g, s0, max_steps)});
    *out = handle.release();
    return DGG_OK;
  });
}

int dgg_dynamics_end(const dgg_dynamics_run* run) {
  if (!run) return DGG_DYNAMICS_STEP_LIMIT;
  switch (run->r.end) {
    case dgg::DynamicsRun::End::ReachedNe:
      return DGG_DYNAMICS_REACHED_NE;
    case dgg::DynamicsRun::End::ImprovementCycle:
      return DGG_DYNAMICS_CYCLE;
    case dgg::DynamicsRun::End::StepLimit:
      return DGG_DYNAMICS_STEP_LIMIT;
  }
  return DGG_DYNAMICS_STEP_LIMIT;
}

int dgg_dynamics_step_count(const dgg_dynamics_run* run) {
  return run ? static_cast<int>(run->r.steps.size()) : 0;
}

int dgg_dynamics_step(const dgg_dynamics_run* run, int index, int* player,
                      dgg_situation** sit) {
  if (!run) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  if (index < 0 || index >= static_cast<int>(run->r.steps.size()))
    return fail(DGG_ERR_INVALID_ARGUMENT, "step index out of range");
  return wrap([&] {
    if (player) *player = run->r.steps[static_cast<size_t>(index)].player;
    if (sit)
      *sit = std::make_unique<dgg_situation>(
                 dgg_situation{run->r.steps[static_cast<size_t>(index)].situation})
                 .release();
    return DGG_OK;
  });
}

int dgg_dynamics_cycle_start(const dgg_dynamics_run* run) {
  if (!run || !run->r.cycle_start) return -1;
  return *run->r.cycle_start;
}

void dgg_dynamics_free(dgg_dynamics_run* run) { delete run; }

int dgg_search_ne_free(const dgg_gen_params* params, uint64_t trials,
                       dgg_progress_fn progress, void* ctx,
                       dgg_search_results** out) {
  if (!params || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  return wrap([&] {
    dgg::SearchProgress cb;
    if (progress)
      cb = [progress, ctx](std::uint64_t done, std::uint64_t total) {
        progress(done, total, ctx);
      };
    auto handle = std::make_unique<dgg_search_results>(
        dgg_search_results{dgg::search_ne_free(to_params(params), trials, cb)});
    *out = handle.release();
    return DGG_OK;
  });
}

int dgg_search_hit_count(const dgg_search_results* res, uint64_t* out) {
  if (!res || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  *out = res->hits.size();
  return DGG_OK;
}

int dgg_search_hit_seed(const dgg_search_results* res, uint64_t index,
                        uint64_t* out) {
  if (!res || !out) return fail(DGG_ERR_INVALID_ARGUMENT, "null argument");
  if (index >= res->hits.size())
    return fail(DGG_ERR_INVALID_ARGUMENT, "hit index out of range");
  *out = res->hits[index].seed;
  return DGG_OK;
}

void dgg_search_results_free(dgg_search_results* res) { delete res; }
