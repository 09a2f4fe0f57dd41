/* C interface for the parrondo library. */

#ifndef PARRONDO_H
#define PARRONDO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every FFI call.
typedef enum ParrondoStatus {
  PARRONDO_STATUS_OK = 0,
  // A required pointer argument was NULL.
  PARRONDO_STATUS_NULL_POINTER = 1,
  // A parameter was out of its documented domain.
  PARRONDO_STATUS_INVALID_ARGUMENT = 2,
  // A policy or pattern string failed to parse.
  PARRONDO_STATUS_INVALID_POLICY = 3,
  // The chain has no unique stationary distribution.
  PARRONDO_STATUS_NOT_IRREDUCIBLE = 4,
  // The win rate never crosses one half on the bias range.
  PARRONDO_STATUS_NO_SIGN_CHANGE = 5,
  // The win rate is not strictly decreasing on the bias range.
  PARRONDO_STATUS_NOT_MONOTONE = 6,
  // An output buffer was shorter than the modulus.
  PARRONDO_STATUS_BUFFER_TOO_SMALL = 7,
  // A numeric solve degenerated.
  PARRONDO_STATUS_NUMERICAL_FAILURE = 8,
} ParrondoStatus;

// Which game an analytic query refers to.
typedef enum ParrondoGame {
  PARRONDO_GAME_A = 0,
  PARRONDO_GAME_B = 1,
  // Uses the `gamma` argument of the call.
  PARRONDO_GAME_MIXTURE = 2,
  PARRONDO_GAME_OPTIMAL = 3,
} ParrondoGame;

// Opaque game-parameter handle (bias and modulus).
typedef struct ParrondoParams ParrondoParams;

// Summary of one simulated run.
typedef struct ParrondoSimSummary {
  uint64_t n_plays;
  uint64_t seed;
  int64_t final_profit;
  uint64_t wins;
  double empirical_win_rate;
} ParrondoSimSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a parameter handle for bias `alpha` in `[0, 0.1)` and modulus
// `>= 2`. On success writes the handle to `out` and transfers ownership to
// the caller, who must release it with `parrondo_params_free`.
//
// # Safety
// `out` must be a valid pointer to writable memory for one pointer.
enum ParrondoStatus parrondo_params_new(double alpha,
                                        uint32_t modulus,
                                        struct ParrondoParams **out);

// Releases a handle created by `parrondo_params_new`. NULL is a no-op.
//
// # Safety
// `params` must be NULL or a pointer previously returned by
// `parrondo_params_new` that has not been freed yet.
void parrondo_params_free(struct ParrondoParams *params);

// Long-run one-play win probability of `game`. `gamma` is read only for
// `PARRONDO_GAME_MIXTURE`.
//
// # Safety
// `params` must be a live handle; `out_rate` must point to a writable f64.
enum ParrondoStatus parrondo_win_rate(const struct ParrondoParams *params,
                                      enum ParrondoGame game,
                                      double gamma,
                                      double *out_rate);

// Stationary distribution of `game` over capital residues. Writes exactly
// `modulus` doubles into `out_probs`; `len` is the buffer capacity.
//
// # Safety
// `params` must be a live handle; `out_probs` must point to at least `len`
// writable doubles.
enum ParrondoStatus parrondo_stationary(const struct ParrondoParams *params,
                                        enum ParrondoGame game,
                                        double gamma,
                                        double *out_probs,
                                        uintptr_t len);

// Long-run win rate of a periodic pattern such as `"AAB"`.
//
// # Safety
// `params` must be a live handle; `pattern` must be a NUL-terminated
// string; `out_rate` must point to a writable f64.
enum ParrondoStatus parrondo_pattern_win_rate(const struct ParrondoParams *params,
                                              const char *pattern,
                                              double *out_rate);

// Bias at which the `gamma`-mixture's win rate crosses one half, by
// bisection to bracket width `tol`.
//
// # Safety
// `out_alpha` must point to a writable f64.
enum ParrondoStatus parrondo_critical_alpha(double gamma,
                                            uint32_t modulus,
                                            double tol,
                                            double *out_alpha);

// Runs one seeded simulation. The policy string follows the CLI grammar:
// `A` | `B` | `pattern:<AB...>` | `mix:<gamma>` | `optimal`.
//
// # Safety
// `params` must be a live handle; `policy` must be a NUL-terminated
// string; `out` must point to a writable `ParrondoSimSummary`.
enum ParrondoStatus parrondo_simulate(const struct ParrondoParams *params,
                                      const char *policy,
                                      uint64_t n_plays,
                                      uint64_t seed,
                                      struct ParrondoSimSummary *out);

// Runs `n_runs` independent simulations (run `r` draws from stream `r` of
// `seed`) and writes the mean per-play profit and the sample standard
// deviation of the per-run final profits.
//
// # Safety
// `params` must be a live handle; `policy` must be a NUL-terminated
// string; both out pointers must point to writable f64s.
enum ParrondoStatus parrondo_batch(const struct ParrondoParams *params,
                                   const char *policy,
                                   uint64_t n_plays,
                                   uint64_t n_runs,
                                   uint64_t seed,
                                   double *out_mean_profit_per_play,
                                   double *out_std_dev_final_profit);

// Static description of a status code; never NULL, never freed.
const char *parrondo_status_message(enum ParrondoStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARRONDO_H */
