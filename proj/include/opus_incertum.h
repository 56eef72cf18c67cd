#ifndef OPUS_INCERTUM_H
#define OPUS_INCERTUM_H

#include <stddef.h>
#include <stdint.h>

#define OI_EXPORT __attribute__((visibility("default")))

#ifdef __cplusplus
extern "C" {
#endif

/* Strip-packing solver: pieces are simple polygons packed into a strip of
 * fixed height and minimized length.  All entry points return oi_status;
 * OI_OK is 0.  Objects returned through out-parameters are owned by the
 * caller and released with the matching _free function.  When an errbuf is
 * supplied, failures leave a NUL-terminated message in it. */

typedef enum oi_status {
  OI_OK = 0,
  OI_ERR_INVALID_ARGUMENT = 1,
  OI_ERR_PARSE = 2,
  OI_ERR_GEOMETRY = 3,
  OI_ERR_CONFIG = 4,
  OI_ERR_INFEASIBLE = 5,
  OI_ERR_LIMIT = 6,
  OI_ERR_IO = 7,
  OI_ERR_INTERNAL = 8
} oi_status;

typedef struct oi_instance oi_instance;
typedef struct oi_solution oi_solution;

OI_EXPORT const char* oi_status_name(oi_status s);
OI_EXPORT const char* oi_version(void);

/* ---- instances ---- */

OI_EXPORT oi_status oi_instance_from_json(const char* json_text, oi_instance** out, char* errbuf,
                                          size_t errlen);
OI_EXPORT oi_status oi_instance_from_file(const char* path, oi_instance** out, char* errbuf,
                                          size_t errlen);
OI_EXPORT void oi_instance_free(oi_instance* inst);

OI_EXPORT int oi_instance_piece_count(const oi_instance* inst); /* after multiplicity */
OI_EXPORT double oi_instance_height(const oi_instance* inst);
/* rotation step recorded in the file, or 0 when absent */
OI_EXPORT double oi_instance_rotation_step(const oi_instance* inst);
OI_EXPORT const char* oi_instance_name(const oi_instance* inst);

/* ---- solving ---- */

typedef struct oi_solve_options {
  double theta_step_deg;    /* orbit angle resolution, default 5 */
  double rotation_step_deg; /* orientation resolution; <= 0 takes the instance value (fallback 90) */
  double delta_r;           /* radial step, default 5 */
  double r_max;             /* 0 = automatic per pair */
  int max_cluster;          /* 0 = backend default (brute 8, qaoa 4) */
  int n_partitions;         /* default 20 */
  int use_qaoa;             /* 0 = exhaustive path search, 1 = simulated QAOA */
  int qaoa_reps;
  int qaoa_shots;
  int qaoa_max_evals;
  int qaoa_optimizer;       /* 0 = coordinate descent, 1 = Nelder-Mead, 2 = SPSA */
  int qaoa_min_size;        /* clusters below this always use brute force */
  int grid_divisions;       /* relocation grid, default 100 */
  int relaxation_cap;
  int workers;
  int literal_stop_clustering;
  uint64_t seed;
  const char* cache_dir;    /* NULL = no table cache */
} oi_solve_options;

OI_EXPORT void oi_solve_options_init(oi_solve_options* opt);

OI_EXPORT oi_status oi_solve(const oi_instance* inst, const oi_solve_options* opt,
                             oi_solution** out, char* errbuf, size_t errlen);

OI_EXPORT double oi_solution_length(const oi_solution* sol);
OI_EXPORT double oi_solution_height(const oi_solution* sol);
OI_EXPORT double oi_solution_waste_ratio(const oi_solution* sol);
OI_EXPORT int oi_solution_piece_count(const oi_solution* sol);
OI_EXPORT oi_status oi_solution_pose(const oi_solution* sol, int piece, double* x, double* y,
                                     double* angle_deg);
/* 0 when every piece is inside the strip and no interiors overlap */
OI_EXPORT int oi_solution_violations(const oi_solution* sol);

OI_EXPORT oi_status oi_solution_write_svg(const oi_solution* sol, const char* path, char* errbuf,
                                          size_t errlen);
OI_EXPORT oi_status oi_solution_write_report(const oi_solution* sol, const char* path,
                                             char* errbuf, size_t errlen);
OI_EXPORT oi_status oi_solution_report_json(const oi_solution* sol, char** out_json, char* errbuf,
                                            size_t errlen);
OI_EXPORT void oi_solution_free(oi_solution* sol);

/* ---- QAOA parameter study ---- */

typedef struct oi_tune_options {
  int instances;
  int nodes;
  int reps_min;
  int reps_max;
  int shots;
  int max_evals;
  uint64_t seed;
  int optimizer; /* 0 = coordinate descent, 1 = Nelder-Mead, 2 = SPSA, 3 = all */
} oi_tune_options;

OI_EXPORT void oi_tune_options_init(oi_tune_options* opt);
OI_EXPORT oi_status oi_tune_qaoa(const oi_tune_options* opt, char** out_json, char* errbuf,
                                 size_t errlen);

/* ---- no-fit table inspection ---- */

OI_EXPORT oi_status oi_nff_table_json(const oi_instance* inst, int piece_a, int piece_b,
                                      const oi_solve_options* opt, char** out_json, char* errbuf,
                                      size_t errlen);

OI_EXPORT void oi_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* OPUS_INCERTUM_H */
