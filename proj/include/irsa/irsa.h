/*
 * irsa - multi-class irregular repetition slotted ALOHA simulation and
 * analysis library.
 *
 * C interface of the shared library: opaque handles, status codes, and
 * UTF-8 strings owned by the library. Every function that can fail returns
 * an irsa_status; irsa_last_error() gives a thread-local detail message for
 * the most recent failure on the calling thread. Handles are created and
 * destroyed with matching create/destroy pairs and are not thread-safe for
 * concurrent mutation, but distinct handles are independent.
 */

#ifndef IRSA_IRSA_H
#define IRSA_IRSA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum irsa_status {
    IRSA_OK = 0,
    IRSA_ERR_NOT_NORMALIZED = 1,
    IRSA_ERR_NEGATIVE_PROBABILITY = 2,
    IRSA_ERR_ZERO_DEGREE = 3,
    IRSA_ERR_ZERO_TOTAL_LOAD = 4,
    IRSA_ERR_LENGTH_MISMATCH = 5,
    IRSA_ERR_DEGREE_EXCEEDS_FRAME = 6,
    IRSA_ERR_EMPTY_FRAME = 7,
    IRSA_ERR_COUNT_EXCEEDS_POPULATION = 8,
    IRSA_ERR_DECODED_NOT_ACTIVATED = 9,
    IRSA_ERR_LOAD_EXCEEDS_POPULATION = 10,
    IRSA_ERR_INCONSISTENT_LOAD = 11,
    IRSA_ERR_NOT_TWO_DIMENSIONAL = 12,
    IRSA_ERR_OUTSIDE_REGION = 13,
    IRSA_ERR_EXCEEDS_THRESHOLD = 14,
    IRSA_ERR_PARSE = 15,
    IRSA_ERR_VALIDATION = 16,
    IRSA_ERR_IO = 17,
    IRSA_ERR_INVALID_ARGUMENT = 18,
    IRSA_ERR_INTERNAL = 19
} irsa_status;

/* Library version string, e.g. "0.1.0". */
const char* irsa_version(void);

/* Stable name of a status code, e.g. "not_normalized". */
const char* irsa_status_name(irsa_status status);

/* Detail message of the last failing call on this thread ("" if none). */
const char* irsa_last_error(void);

/* ---- packet repetition degree distributions ---------------------------- */

typedef struct irsa_dist irsa_dist;

/* Creates a distribution from parallel arrays of degrees (>= 1) and
 * probabilities (nonnegative, summing to 1 within 1e-9). */
irsa_status irsa_dist_create(const uint32_t* degrees, const double* probs, size_t count,
                             irsa_dist** out);
void irsa_dist_destroy(irsa_dist* dist);

double irsa_dist_mean_degree(const irsa_dist* dist);
uint32_t irsa_dist_max_degree(const irsa_dist* dist);

/* Draws `count` degrees from substream `stream` of `seed`; the same
 * (seed, stream) pair always yields the same values. */
irsa_status irsa_dist_sample(const irsa_dist* dist, uint64_t seed, uint64_t stream,
                             size_t count, uint32_t* out_degrees);

/* Load-weighted mixture of k distributions. */
irsa_status irsa_dist_mix(const double* loads, const irsa_dist* const* dists, size_t count,
                          irsa_dist** out);

/* ---- density evolution -------------------------------------------------- */

/* Residual edge-erasure probability after iterating at the given load. */
irsa_status irsa_de_iterate(const irsa_dist* dist, double load, uint32_t max_iters,
                            double tol, double* out_residual);

/* Largest load with vanishing asymptotic loss, to within `tol` (<= 0 picks
 * the default 1e-4). */
irsa_status irsa_de_threshold(const irsa_dist* dist, double tol, double* out_g_star);

/* ---- achievable-throughput region -------------------------------------- */

/* Per-class caps min(t_star, N_i/M) and sum cap min(t_star, sum N_i/M).
 * t_star = 1 gives the finite-network outer bound. */
irsa_status irsa_capacity_region(double t_star, uint32_t frame_size,
                                 const uint32_t* populations, size_t num_classes,
                                 double* out_class_caps, double* out_sum_cap);

/* Closed-region membership test of a throughput tuple. */
irsa_status irsa_region_contains(const double* class_caps, size_t num_classes,
                                 double sum_cap, const double* tuple, int* out_inside);

/* Vertices of the two-class region polygon, counterclockwise from the
 * origin. Pass capacity 0 to query the needed vertex count; out_xy holds
 * x0,y0,x1,y1,... and must fit 2*capacity doubles. */
irsa_status irsa_region_boundary_2d(const double* class_caps, double sum_cap,
                                    uint32_t resolution, double* out_xy, size_t capacity,
                                    size_t* out_count);

/* ---- experiments -------------------------------------------------------- */

typedef struct irsa_experiment irsa_experiment;
typedef struct irsa_result irsa_result;

/* Parses and validates a JSON experiment configuration. */
irsa_status irsa_experiment_parse(const char* json_text, irsa_experiment** out);
void irsa_experiment_destroy(irsa_experiment* experiment);

/* Kind string: "sweep", "region", "delay", "dual_check" or "threshold". */
const char* irsa_experiment_kind(const irsa_experiment* experiment);

/* Nonzero when the configuration carries a seed. */
int irsa_experiment_has_seed(const irsa_experiment* experiment);

irsa_status irsa_experiment_set_seed(irsa_experiment* experiment, uint64_t seed);
irsa_status irsa_experiment_set_workers(irsa_experiment* experiment, uint32_t workers);

/* Runs the experiment to completion; deterministic for a fixed seed. */
irsa_status irsa_experiment_run(const irsa_experiment* experiment, irsa_result** out);
void irsa_result_destroy(irsa_result* result);

/* Primary CSV artifact (valid until the result is destroyed). */
const char* irsa_result_csv(const irsa_result* result);

/* Secondary artifacts, e.g. the threshold iteration trace. */
size_t irsa_result_extra_count(const irsa_result* result);
const char* irsa_result_extra_name(const irsa_result* result, size_t index);
const char* irsa_result_extra_csv(const irsa_result* result, size_t index);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* IRSA_IRSA_H */
