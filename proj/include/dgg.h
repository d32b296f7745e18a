#ifndef DGG_H
#define DGG_H

/* C interface to the deterministic graphical game solver library.
 *
 * All handles are opaque and owned by the caller once returned; free them
 * with the matching *_free function. Functions returning int give an error
 * code (DGG_OK on success); on failure dgg_last_error() describes the
 * problem for the calling thread. Strings returned through char** are
 * heap copies; release them with dgg_string_free. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define DGG_OK 0
#define DGG_ERR_INVALID_ARGUMENT 1 /* null handle or bad parameter */
#define DGG_ERR_PARSE 2            /* text input does not parse */
#define DGG_ERR_VALIDATION 3       /* input violates a game/situation rule */
#define DGG_ERR_UNSUPPORTED 4      /* operation undefined for this input */
#define DGG_ERR_TOO_LARGE 5        /* enumeration exceeds the index width */
#define DGG_ERR_INTERNAL 6         /* invariant failure inside the library */

typedef struct dgg_game dgg_game;
typedef struct dgg_situation dgg_situation;
typedef struct dgg_certificate dgg_certificate;
typedef struct dgg_dynamics_run dgg_dynamics_run;
typedef struct dgg_solve_result dgg_solve_result;
typedef struct dgg_search_results dgg_search_results;

const char* dgg_version(void);
/* Message for the current thread's most recent failure; never NULL. */
const char* dgg_last_error(void);
void dgg_string_free(char* s);

/* ---- games ---- */

int dgg_game_parse(const char* text, dgg_game** out);
/* name: fig1, fig2, or fig2-terminal. */
int dgg_game_fixture(const char* name, dgg_game** out);
void dgg_game_free(dgg_game* game);
/* Canonical text form; parsing it back yields an equal game. */
int dgg_game_print(const dgg_game* game, char** out);
/* DOT rendering; situation may be NULL (then no arcs are bold). */
int dgg_game_dot(const dgg_game* game, const dgg_situation* sit, char** out);

int dgg_game_players(const dgg_game* game);
int dgg_game_positions(const dgg_game* game);
int dgg_game_internals(const dgg_game* game);
int dgg_game_terminals(const dgg_game* game);
int dgg_game_classify(const dgg_game* game, int* terminal_game, int* play_once,
                      int* terminal_reachable);
int dgg_game_situation_count(const dgg_game* game, uint64_t* out);

/* ---- generators ---- */

typedef struct dgg_gen_params {
  int positions;
  int terminals;
  int players;
  int max_out_degree;
  int force_play_once;
  int force_terminal_game;
  int force_terminal_reachable;
  uint64_t seed;
} dgg_gen_params;

void dgg_gen_params_init(dgg_gen_params* params);

int dgg_game_random(const dgg_gen_params* params, dgg_game** out);
int dgg_game_random_acyclic(const dgg_gen_params* params, dgg_game** out);
/* Terminal-game instance whose terminals cannot be reached from init. */
int dgg_game_random_unreachable(const dgg_gen_params* params, dgg_game** out);

/* ---- situations ---- */

/* Text form: one "FROM -> TO" line per non-terminal position. */
int dgg_situation_parse(const dgg_game* game, const char* text,
                        dgg_situation** out);
int dgg_situation_at(const dgg_game* game, uint64_t index, dgg_situation** out);
int dgg_situation_index(const dgg_game* game, const dgg_situation* sit,
                        uint64_t* out);
int dgg_situation_print(const dgg_game* game, const dgg_situation* sit,
                        char** out);
void dgg_situation_free(dgg_situation* sit);

/* outcome: terminal name or "inf". play: space-separated walk from init. */
int dgg_evaluate(const dgg_game* game, const dgg_situation* sit, char** outcome,
                 char** play);

/* is_ne set to 1/0. When 0 and the out-params are non-NULL, they receive the
 * first improving deviation: the player, their new situation, and the outcome
 * they reach. */
int dgg_check_ne(const dgg_game* game, const dgg_situation* sit, int* is_ne,
                 int* witness_player, dgg_situation** witness_sit,
                 char** witness_outcome);

/* ---- solving ---- */

#define DGG_METHOD_AUTO 0
#define DGG_METHOD_PLAYONCE 1
#define DGG_METHOD_TERMINAL3 2
#define DGG_METHOD_TERMINAL_PLAYONCE 3
#define DGG_METHOD_ORACLE 4

#define DGG_SOLVE_NE 0          /* equilibrium found */
#define DGG_SOLVE_NO_NE 1       /* certified: no (terminal, if required) NE */
#define DGG_SOLVE_UNSUPPORTED 2 /* chosen method undefined for this game */

/* method AUTO routes on the game class: terminal play-once games with a
 * reachable terminal get the terminal-play-once construction, other
 * play-once games the play-once construction, terminal games with at most
 * three terminals the reduction engine, everything else the exhaustive
 * scan. require_terminal demands a terminal-outcome equilibrium; when the
 * chosen construction yields endless play even though one might exist, the
 * exhaustive scan settles it. */
int dgg_solve(const dgg_game* game, int method, int require_terminal,
              dgg_solve_result** out);
int dgg_solve_status(const dgg_solve_result* res);
int dgg_solve_method(const dgg_solve_result* res); /* resolved method */
/* Only valid when status is DGG_SOLVE_NE. */
int dgg_solve_situation(const dgg_solve_result* res, dgg_situation** out);
/* Reduction-engine counters; any out-param may be NULL. Zero for other
 * methods. */
int dgg_solve_stats(const dgg_solve_result* res, int* reductions, int* pinned,
                    int* bottlenecks, int* lift_failures, int* oracle_fallbacks);
void dgg_solve_result_free(dgg_solve_result* res);

/* ---- certification ---- */

#define DGG_CERT_NE_FREE 0
#define DGG_CERT_HAS_NE 1
#define DGG_CERT_NO_TERMINAL_NE 2

/* want_all scans the whole situation space and collects every equilibrium;
 * otherwise the scan stops at the first one. */
int dgg_certify(const dgg_game* game, int want_all, dgg_certificate** out);
int dgg_certificate_tag(const dgg_certificate* cert);
int dgg_certificate_examined(const dgg_certificate* cert, uint64_t* out);
int dgg_certificate_terminal_ne_count(const dgg_certificate* cert,
                                      uint64_t* out);
int dgg_certificate_other_ne_count(const dgg_certificate* cert, uint64_t* out);
int dgg_certificate_terminal_ne(const dgg_certificate* cert, uint64_t index,
                                dgg_situation** out);
int dgg_certificate_other_ne(const dgg_certificate* cert, uint64_t index,
                             dgg_situation** out);
void dgg_certificate_free(dgg_certificate* cert);

/* ---- improvement dynamics ---- */

#define DGG_DYNAMICS_REACHED_NE 0
#define DGG_DYNAMICS_CYCLE 1
#define DGG_DYNAMICS_STEP_LIMIT 2

/* start may be NULL: the situation with index 0 (all lowest-named moves) is
 * used. While the state is not an equilibrium, the lowest-indexed player
 * with a profitable deviation switches to their best response. */
int dgg_dynamics(const dgg_game* game, const dgg_situation* start,
                 int max_steps, dgg_dynamics_run** out);
int dgg_dynamics_end(const dgg_dynamics_run* run);
int dgg_dynamics_step_count(const dgg_dynamics_run* run);
int dgg_dynamics_step(const dgg_dynamics_run* run, int index, int* player,
                      dgg_situation** sit);
/* Index of the first occurrence of the repeated state (start counts as
 * index 0), or -1 when the run did not cycle. */
int dgg_dynamics_cycle_start(const dgg_dynamics_run* run);
void dgg_dynamics_free(dgg_dynamics_run* run);

/* ---- search for equilibrium-free games ---- */

typedef void (*dgg_progress_fn)(uint64_t done, uint64_t total, void* ctx);

/* Generates `trials` games from params (seed, seed+1, ...), certifies each,
 * and keeps the seeds of those without any equilibrium. progress may be
 * NULL. */
int dgg_search_ne_free(const dgg_gen_params* params, uint64_t trials,
                       dgg_progress_fn progress, void* ctx,
                       dgg_search_results** out);
int dgg_search_hit_count(const dgg_search_results* res, uint64_t* out);
int dgg_search_hit_seed(const dgg_search_results* res, uint64_t index,
                        uint64_t* out);
void dgg_search_results_free(dgg_search_results* res);

#ifdef __cplusplus
}
#endif

#endif /* DGG_H */
