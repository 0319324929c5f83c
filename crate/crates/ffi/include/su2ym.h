#ifndef SU2YM_H
#define SU2YM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call.
typedef enum Su2ymStatus {
  SU2YM_STATUS_OK = 0,
  // A required pointer argument was null.
  SU2YM_STATUS_NULL_POINTER = 1,
  // Arguments were malformed: unknown names, wrong lengths, bad numbers.
  SU2YM_STATUS_INVALID_INPUT = 2,
  // The computation itself failed, for example a balance that does not close.
  SU2YM_STATUS_COMPUTATION_FAILED = 3,
  // A Rust panic was caught at the boundary.
  SU2YM_STATUS_PANIC = 4,
} Su2ymStatus;

// Opaque integrated trajectory.
typedef struct Su2ymTrajectory Su2ymTrajectory;

typedef struct Su2ymComplex {
  double re;
  double im;
} Su2ymComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null after a
// success. Valid until the next call on this thread; do not free.
const char *su2ym_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void su2ym_string_free(char *s);

// Runs the exact identity checks. Writes the report as JSON to `*out_json`
// and whether every check passed to `*out_passed` (may be null).
//
// # Safety
// `out_json` must be valid for writes.
enum Su2ymStatus su2ym_verify_json(char **out_json, bool *out_passed);

// Balance of `system` (`"4d"` or `"5d"`) on the branch `epsilon = ±i`
// (`branch_sign` is `1` or `-1`), to `order` powers of `t^(1/2)`.
//
// # Safety
// `system` must be a nul-terminated string; `out_json` valid for writes.
enum Su2ymStatus su2ym_balance_json(const char *system,
                                    int32_t branch_sign,
                                    size_t order,
                                    char **out_json);

// Branch points and genus of `curve` (`"C_eps"`, `"H_eps"`, `"Gamma_eps"`
// or `"P6"`) for `draws` seeded random parameter sets.
//
// # Safety
// `curve` must be a nul-terminated string; `out_json` valid for writes.
enum Su2ymStatus su2ym_curves_json(const char *curve,
                                   uint64_t seed,
                                   size_t draws,
                                   double cluster_tol,
                                   char **out_json);

// Genus of an `n_sheets`-sheeted cover with `branch_points` simple branch
// points.
//
// # Safety
// `out_genus` must be valid for writes.
enum Su2ymStatus su2ym_genus_riemann_hurwitz(uint32_t n_sheets,
                                             size_t branch_points,
                                             int64_t *out_genus);

// Integrates `system` from `state[0..dim]` along the straight ray from `t0`
// to `t1`. `rtol` or `atol` of zero or less select the defaults
// (`1e-12`, `1e-14`). The trajectory is returned even if the integrator
// stopped early; see [`su2ym_trajectory_completed`].
//
// # Safety
// `system` must be a nul-terminated string, `state` must point to `dim`
// values and `out` must be valid for writes.
enum Su2ymStatus su2ym_integrate(const char *system,
                                 const struct Su2ymComplex *state,
                                 size_t dim,
                                 struct Su2ymComplex a,
                                 struct Su2ymComplex t0,
                                 struct Su2ymComplex t1,
                                 double rtol,
                                 double atol,
                                 struct Su2ymTrajectory **out);

// Releases a trajectory. Null is ignored.
//
// # Safety
// `traj` must come from [`su2ym_integrate`] and not have been freed.
void su2ym_trajectory_free(struct Su2ymTrajectory *traj);

// Number of stored samples, or 0 for null.
//
// # Safety
// `traj` must be null or a live trajectory.
size_t su2ym_trajectory_len(const struct Su2ymTrajectory *traj);

// State dimension, or 0 for null.
//
// # Safety
// `traj` must be null or a live trajectory.
size_t su2ym_trajectory_dim(const struct Su2ymTrajectory *traj);

// Whether the integration reached the end of the span.
//
// # Safety
// `traj` must be null or a live trajectory.
bool su2ym_trajectory_completed(const struct Su2ymTrajectory *traj);

// Copies sample `index`: its time to `*t_out` and its state to
// `state_out[0..state_len]`; `state_len` must equal the dimension.
//
// # Safety
// `traj` must be a live trajectory, `t_out` valid for writes and
// `state_out` valid for `state_len` writes.
enum Su2ymStatus su2ym_trajectory_sample(const struct Su2ymTrajectory *traj,
                                         size_t index,
                                         struct Su2ymComplex *t_out,
                                         struct Su2ymComplex *state_out,
                                         size_t state_len);

// Drift of the system's invariants along the trajectory, as JSON.
//
// # Safety
// `traj` must be a live trajectory; `out_json` valid for writes.
enum Su2ymStatus su2ym_trajectory_drift_json(const struct Su2ymTrajectory *traj, char **out_json);

// Separation and quadrature checks along a 4d trajectory, as a report.
//
// # Safety
// `traj` must be a live trajectory; `out_json` valid for writes;
// `out_passed` null or valid for writes.
enum Su2ymStatus su2ym_trajectory_checks_json(const struct Su2ymTrajectory *traj,
                                              char **out_json,
                                              bool *out_passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SU2YM_H */
