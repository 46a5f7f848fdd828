#ifndef SHOCKSENS_H
#define SHOCKSENS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShkBranch {
  SHK_BRANCH_TAU = 0,
  SHK_BRANCH_ALPHA = 1,
  SHK_BRANCH_BETA = 2,
  SHK_BRANCH_GAMMA = 3,
} ShkBranch;

typedef enum ShkLoopKind {
  /*
   Saddle loop with a simple turning point.
   */
  SHK_LOOP_KIND_LOOP = 0,
  /*
   Double zero: the orbit connects to the collision fixed point.
   */
  SHK_LOOP_KIND_HETEROCLINIC = 1,
  SHK_LOOP_KIND_ABSENT = 2,
} ShkLoopKind;

typedef enum ShkStability {
  SHK_STABILITY_STABLE_STRUCTURE = 0,
  SHK_STABILITY_UNSTABLE_STRUCTURE = 1,
  SHK_STABILITY_DEGENERATE = 2,
} ShkStability;

typedef enum ShkStatus {
  SHK_STATUS_OK = 0,
  SHK_STATUS_NULL_POINTER = 1,
  SHK_STATUS_INVALID_ARGUMENT = 2,
  SHK_STATUS_LOAD_OUT_OF_DOMAIN = 3,
  SHK_STATUS_NO_HOMOCLINIC = 4,
  SHK_STATUS_BRANCH_ABSENT = 5,
  SHK_STATUS_NO_MAXWELL = 6,
  SHK_STATUS_NON_CONVERGENCE = 7,
  SHK_STATUS_BUFFER_TOO_SMALL = 8,
  SHK_STATUS_PANIC = 9,
} ShkStatus;

/*
 Opaque oscillator handle.
 */
typedef struct ShkSystem ShkSystem;

typedef struct ShkEquilibrium {
  double q;
  enum ShkStability stability;
  enum ShkBranch branch;
} ShkEquilibrium;

typedef struct ShkMaxwell {
  double p_m;
  double q_collision;
  double e_star;
  /*
   NaN when no fold lies in the bracket.
   */
  double p_l;
} ShkMaxwell;

typedef struct ShkBarrierRow {
  double p;
  double e_lambda;
  double e_alpha_per_wave;
  uint32_t n_waves;
  double e_alpha_n;
  double q_turn;
  double q_alpha;
  double q_beta;
} ShkBarrierRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *shk_version(void);

/*
 Message of the last failed call on this thread; empty after a success.
 Valid until the next call on the same thread.
 */
const char *shk_last_error(void);

/*
 Quintic model `V = −½(p_c − p)q² + ¼q⁴ − (γ/6)q⁶`.
 `out` must be writable.
 */
enum ShkStatus shk_system_new_model(double gamma, double p_c, struct ShkSystem **out);

/*
 Free twisted rod; the load `p` of every call is `m`.
 `out` must be writable.
 */
enum ShkStatus shk_system_new_rod(double torsional_stiffness, struct ShkSystem **out);

/*
 Amplitude oscillator of the strut on a softening foundation.
 `out` must be writable.
 */
enum ShkStatus shk_system_new_strut_amplitude(double c, struct ShkSystem **out);

/*
 `sys` must come from a `shk_system_new_*` call and not be used again.
 */
void shk_system_free(struct ShkSystem *sys);

/*
 `sys` must be a live handle.
 */
enum ShkStatus shk_system_set_tolerances(struct ShkSystem *sys, double quad_rel, double root_abs);

/*
 `sys` must be a live handle and `out` writable.
 */
enum ShkStatus shk_potential(const struct ShkSystem *sys, double q, double p, double *out);

/*
 `sys` must be a live handle and `out` writable.
 */
enum ShkStatus shk_potential_deriv(const struct ShkSystem *sys, double q, double p, double *out);

/*
 Fixed points at load `p`, trivial state first. `*len` receives the
 total count; at most `cap` entries are written to `buf`, and
 `SHK_STATUS_BUFFER_TOO_SMALL` is returned when `cap` is short.
 `buf` must hold `cap` entries (may be null when `cap` is 0).
 */
enum ShkStatus shk_fixed_points(const struct ShkSystem *sys,
                                double p,
                                struct ShkEquilibrium *buf,
                                size_t cap,
                                size_t *len);

/*
 Turning point of the localized orbit. `*q` is the turning point for a
 loop, the collision deflection for a heteroclinic, NaN when absent.
 `sys` must be a live handle; `kind` and `q` writable.
 */
enum ShkStatus shk_turning_point(const struct ShkSystem *sys,
                                 double p,
                                 enum ShkLoopKind *kind,
                                 double *q);

/*
 Localized barrier `E = 2∫√(2μ(−V)) dq`.
 `sys` must be a live handle and `out` writable.
 */
enum ShkStatus shk_localized_barrier(const struct ShkSystem *sys, double p, double *out);

/*
 Energy of `n_waves` periodic waves on `branch`.
 `sys` must be a live handle and `out` writable.
 */
enum ShkStatus shk_periodic_energy(const struct ShkSystem *sys,
                                   double p,
                                   enum ShkBranch branch,
                                   uint32_t n_waves,
                                   double *out);

/*
 Fold load in `[lo, hi]`; NaN when there is none.
 `sys` must be a live handle and `out` writable.
 */
enum ShkStatus shk_fold_load(const struct ShkSystem *sys, double lo, double hi, double *out);

/*
 Maxwell load, collision deflection, E* and fold load in `[lo, hi]`.
 `sys` must be a live handle and `out` writable.
 */
enum ShkStatus shk_maxwell(const struct ShkSystem *sys,
                           double lo,
                           double hi,
                           struct ShkMaxwell *out);

/*
 Barrier rows at `n` loads, written to `rows[0..n]`.
 `loads` must hold `n` values and `rows` room for `n` rows.
 */
enum ShkStatus shk_barrier_diagram(const struct ShkSystem *sys,
                                   const double *loads,
                                   size_t n,
                                   uint32_t n_waves,
                                   struct ShkBarrierRow *rows);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHOCKSENS_H */
