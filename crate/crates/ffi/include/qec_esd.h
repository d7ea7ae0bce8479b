#ifndef QEC_ESD_H
#define QEC_ESD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of every call. Values 2-4 match the exit codes of the command-line tool.
typedef enum QecStatus {
  QEC_STATUS_OK = 0,
  // Bad probability, angle, enum value or grid size.
  QEC_STATUS_INVALID_ARGUMENT = 2,
  // Numerical failure (eigensolver, non-physical state).
  QEC_STATUS_COMPUTE = 3,
  QEC_STATUS_IO = 4,
  // A required pointer argument was null.
  QEC_STATUS_NULL_POINTER = 5,
  // The library panicked; this is a bug.
  QEC_STATUS_PANIC = 6,
} QecStatus;

typedef enum QecChannel {
  QEC_CHANNEL_AD = 0,
  QEC_CHANNEL_PD = 1,
  QEC_CHANNEL_COMBINED = 2,
} QecChannel;

typedef enum QecFamily {
  // cos(a)|11> + sin(a)|00>
  QEC_FAMILY_PHI = 0,
  // cos(a)|10> + sin(a)|01>
  QEC_FAMILY_PSI = 1,
} QecFamily;

typedef enum QecCodeKind {
  QEC_CODE_KIND_NONE = 0,
  QEC_CODE_KIND_LEUNG4 = 1,
  QEC_CODE_KIND_PHASE3 = 2,
  QEC_CODE_KIND_LAFLAMME5 = 3,
} QecCodeKind;

// Noise model and protection shared by both qubits.
typedef struct QecScenario QecScenario;

// Result of `qec_sweep_run`.
typedef struct QecSweep QecSweep;

// One point of a sweep.
typedef struct QecSweepRecord {
  double p;
  double c_unc;
  double c_cor;
  double f_unc;
  double f_cor;
} QecSweepRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *qec_version(void);

// Copies the calling thread's last error message into `buf` (truncated and
// always NUL-terminated when `len > 0`). Returns the length of the full
// message excluding the terminator; the message is empty after a success.
//
// # Safety
// `buf` is null or points to `len` writable bytes.
size_t qec_last_error_message(char *buf, size_t len);

// Creates a scenario. `p` is the amplitude-damping probability for `AD` and
// `COMBINED`, the phase-damping probability for `PD`. For `COMBINED` the
// phase-damping probability follows `1 - (1 - p)^kappa`; `kappa` is ignored
// otherwise.
//
// # Safety
// `out` is null or valid for writes.
enum QecStatus qec_scenario_new(uint32_t channel_kind,
                                uint32_t code_kind,
                                double p,
                                double kappa,
                                struct QecScenario **out);

// Releases a scenario; null is ignored.
//
// # Safety
// `scenario` is null or came from `qec_scenario_new` and has not been freed.
void qec_scenario_free(struct QecScenario *scenario);

// Evolves `family(alpha)` through the scenario; writes the 4x4 density
// matrix to `rho_out` (32 doubles).
//
// # Safety
// `scenario` is null or live; `rho_out` is null or points to 32 writable doubles.
enum QecStatus qec_evolve_pair(const struct QecScenario *scenario,
                               uint32_t family_kind,
                               double alpha,
                               double *rho_out);

// Concurrence and fidelity with the initial state after evolving
// `family(alpha)` through the scenario. Either output may be null.
//
// # Safety
// `scenario` is null or live; each output is null or valid for writes.
enum QecStatus qec_pair_metrics(const struct QecScenario *scenario,
                                uint32_t family_kind,
                                double alpha,
                                double *concurrence_out,
                                double *fidelity_out);

// Wootters concurrence of a two-qubit density matrix given as 32 doubles.
//
// # Safety
// `rho` is null or points to 32 readable doubles; `out` is null or valid for writes.
enum QecStatus qec_concurrence(const double *rho, double *out);

// Onset of sudden death on the simulated curve of `family(alpha)`; the
// scenario's own probability is ignored. `found` is false when the
// concurrence never vanishes for p < 1.
//
// # Safety
// `scenario` is null or live; each output is null or valid for writes.
enum QecStatus qec_onset_numeric(const struct QecScenario *scenario,
                                 uint32_t family_kind,
                                 double alpha,
                                 double *onset,
                                 bool *found);

// Closed-form onset for the unprotected pair. `kappa` is used for
// `COMBINED` only.
//
// # Safety
// Each output is null or valid for writes.
enum QecStatus qec_onset_analytic(uint32_t family_kind,
                                  uint32_t channel_kind,
                                  double alpha,
                                  double kappa,
                                  double *onset,
                                  bool *found);

// Runs a sweep over `grid` probabilities from 0 to 1 inclusive, with and
// without `code_kind`.
//
// # Safety
// `out` is null or valid for writes.
enum QecStatus qec_sweep_run(uint32_t channel_kind,
                             uint32_t family_kind,
                             double alpha,
                             double kappa,
                             uint32_t code_kind,
                             size_t grid,
                             struct QecSweep **out);

// Number of records in a sweep; 0 for null.
//
// # Safety
// `sweep` is null or came from `qec_sweep_run` and has not been freed.
size_t qec_sweep_len(const struct QecSweep *sweep);

// Copies record `index` into `out`.
//
// # Safety
// `sweep` is null or live; `out` is null or valid for writes.
enum QecStatus qec_sweep_get(const struct QecSweep *sweep,
                             size_t index,
                             struct QecSweepRecord *out);

// Writes the sweep to `path` as CSV (`json == false`) or JSON, in the same
// layout as the command-line tool.
//
// # Safety
// `sweep` is null or live; `path` is null or a NUL-terminated string.
enum QecStatus qec_sweep_write(const struct QecSweep *sweep, const char *path, bool json);

// Releases a sweep; null is ignored.
//
// # Safety
// `sweep` is null or came from `qec_sweep_run` and has not been freed.
void qec_sweep_free(struct QecSweep *sweep);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QEC_ESD_H */
