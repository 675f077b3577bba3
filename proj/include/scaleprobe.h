/*
 * scaleprobe — C API for the scale-dependent local FEM estimate harness.
 *
 * All functions return sp_status; SP_OK is 0. On failure, sp_last_error()
 * returns a thread-local message describing the most recent error. Handles
 * are opaque and must be released with their matching _destroy call.
 */

#ifndef SCALEPROBE_H
#define SCALEPROBE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SCALEPROBE_API __declspec(dllexport)
#else
#define SCALEPROBE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sp_status {
    SP_OK = 0,
    SP_ERR_INVALID_ARGUMENT = 1,
    SP_ERR_ALIGNMENT = 2,
    SP_ERR_DEGENERATE_SUBDOMAIN = 3,
    SP_ERR_CONTAINMENT = 4,
    SP_ERR_DEGREE = 5,
    SP_ERR_EMPTY = 6,
    SP_ERR_OUT_OF_DOMAIN = 7,
    SP_ERR_SOLVE = 8,
    SP_ERR_PARSE = 9,
    SP_ERR_IO = 10,
    SP_ERR_SCHEMA = 11,
    SP_ERR_INVARIANT = 12,
    SP_ERR_INTERNAL = 13
} sp_status;

typedef struct sp_mesh sp_mesh;
typedef struct sp_space sp_space;
typedef struct sp_cutoff sp_cutoff;
typedef struct sp_config sp_config;

/* Message for the most recent failing call on this thread ("" if none). */
SCALEPROBE_API const char* sp_last_error(void);

SCALEPROBE_API const char* sp_version(void);

/* ---- meshes ----------------------------------------------------------- */

/* Uniform square-cell triangulation of [xmin,xmax] x [ymin,ymax] with n
 * subdivisions along x (the height must be a whole number of cells). */
SCALEPROBE_API sp_status sp_mesh_create(double xmin, double ymin, double xmax, double ymax, int n,
                                        sp_mesh** out);
SCALEPROBE_API void sp_mesh_destroy(sp_mesh* mesh);
SCALEPROBE_API sp_status sp_mesh_size(const sp_mesh* mesh, double* out);
SCALEPROBE_API sp_status sp_mesh_counts(const sp_mesh* mesh, int* vertices, int* triangles);

/* rect arguments are {xmin, ymin, xmax, ymax}. */
SCALEPROBE_API sp_status sp_mesh_cells_in(const sp_mesh* mesh, const double rect[4], int* count);
SCALEPROBE_API sp_status sp_mesh_shrink_by_layers(const sp_mesh* mesh, const double rect[4],
                                                  int layers, double out_rect[4]);
SCALEPROBE_API sp_status sp_mesh_layer_count(const sp_mesh* mesh, const double inner[4],
                                             const double outer[4], int* out);

/* ---- Lagrange spaces --------------------------------------------------- */

SCALEPROBE_API sp_status sp_space_create(const sp_mesh* mesh, int degree, sp_space** out);
SCALEPROBE_API void sp_space_destroy(sp_space* space);
SCALEPROBE_API sp_status sp_space_dim(const sp_space* space, int* out);
SCALEPROBE_API sp_status sp_space_boundary_dof_count(const sp_space* space, int* out);
SCALEPROBE_API sp_status sp_space_interior_dof_count(const sp_space* space, const double rect[4],
                                                     int* out);

/* ---- scale formulas and cutoffs ---------------------------------------- */

/* eps = sqrt(d^-2 (h/d)^(2r) + h/d); requires 0 < h <= d. */
SCALEPROBE_API sp_status sp_epsilon(double d, double h, int degree, double* out);

SCALEPROBE_API sp_status sp_cutoff_create(const double plateau[4], const double support[4],
                                          sp_cutoff** out);
SCALEPROBE_API void sp_cutoff_destroy(sp_cutoff* cutoff);
SCALEPROBE_API sp_status sp_cutoff_value(const sp_cutoff* cutoff, double x, double y, double* out);
SCALEPROBE_API sp_status sp_cutoff_gradient(const sp_cutoff* cutoff, double x, double y,
                                            double out_grad[2]);
SCALEPROBE_API sp_status sp_cutoff_derivative_bound(const sp_cutoff* cutoff, double* out);

/* ---- experiment harness ------------------------------------------------ */

SCALEPROBE_API sp_status sp_config_parse_file(const char* path, sp_config** out);
SCALEPROBE_API sp_status sp_config_parse_text(const char* text, sp_config** out);
SCALEPROBE_API void sp_config_destroy(sp_config* config);
SCALEPROBE_API sp_status sp_config_experiment(const sp_config* config, char* buf, size_t cap);

/* Runs the configured experiment and writes records.csv, fits.csv,
 * plotdata.csv and run.cfg into out_dir. jobs <= 0 keeps the config value.
 * Returns SP_ERR_INVARIANT when a per-experiment invariant fails; the
 * violation lines are then available via sp_last_error(). */
SCALEPROBE_API sp_status sp_run(const sp_config* config, const char* out_dir, int jobs);

/* Regression comparison of two result CSVs with the same schema. mismatches
 * receives the flagged-cell count; the textual report is copied into buf. */
SCALEPROBE_API sp_status sp_compare_files(const char* path_a, const char* path_b, int* mismatches,
                                          char* report_buf, size_t report_cap);

/* Experiment names plus records/fits column schemas, newline separated. */
SCALEPROBE_API sp_status sp_list_experiments(char* buf, size_t cap);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SCALEPROBE_H */
