/* nclp: noncommutative L_p norm machinery at finite matrix dimension.
 *
 * C interface over the core library: opaque handles, status codes, JSON for
 * structured inputs and reports. All functions return NCLP_OK on success;
 * on failure nclp_last_error() describes the problem (thread local).
 *
 * Exponents are doubles; infinity is passed as INFINITY and is handled
 * exactly (1/inf == 0 in all index arithmetic).
 */

#ifndef NCLP_H
#define NCLP_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct nclp_matrix nclp_matrix;
typedef struct nclp_density nclp_density;

typedef enum {
    NCLP_OK = 0,
    NCLP_ERR_DOMAIN = 1,   /* contract violation: bad dimensions, indices, ... */
    NCLP_ERR_PARSE = 2,    /* malformed JSON or unknown name */
    NCLP_ERR_INTERNAL = 3
} nclp_status;

const char* nclp_last_error(void);
void nclp_string_free(char* s);

/* ----- matrices and densities -------------------------------------------- */

/* re/im are row-major rows*cols arrays; im may be NULL for a real matrix. */
nclp_status nclp_matrix_create(long rows, long cols, const double* re, const double* im,
                               nclp_matrix** out);
/* {"rows": m, "cols": n, "re": [[...]], "im": [[...]]} */
nclp_status nclp_matrix_from_json(const char* json, nclp_matrix** out);
nclp_status nclp_matrix_to_json(const nclp_matrix* m, char** json_out);
void nclp_matrix_free(nclp_matrix* m);

nclp_status nclp_density_create(const nclp_matrix* m, double mass, nclp_density** out);
nclp_status nclp_density_from_json(const char* json, nclp_density** out);
void nclp_density_free(nclp_density* d);

/* ----- direct norm evaluations ------------------------------------------- */

nclp_status nclp_schatten_norm(const nclp_matrix* x, double p, double* out);
nclp_status nclp_state_lp_norm(const nclp_matrix* x, const nclp_density* d, double p,
                               double* out);
/* Optimizer-backed norms return an OptimizerReport as JSON. */
nclp_status nclp_factorization_norm(const nclp_matrix* x, double u, double v, uint64_t seed,
                                    char** report_json);
/* spec: {"p","q","u","v","amplification","density","subalgebra",...} */
nclp_status nclp_conditional_norm(const nclp_matrix* x, const char* norm_spec_json,
                                  uint64_t seed, char** report_json);

/* ----- command-level entry points (the CLI is a thin shell over these) --- */

/* config: {"kind": "schatten"|"state-lp"|"factorization"|"conditional"|
 *          "oh"|"mixed-theta"|"rc-square", "input": <matrix>,
 *          "inputs": [<matrix>...], "density": <density>, "p","u","v",
 *          "theta","side","spec","seed"} */
nclp_status nclp_cmd_norm(const char* config_json, char** report_json);

/* Named verification check; *passed is 1 when every case passed. */
nclp_status nclp_cmd_verify(const char* check_name, uint64_t seed, char** report_json,
                            int* passed);
/* Suites: closed-forms, interpolation, graphs, copies, all. */
nclp_status nclp_cmd_suite(const char* suite_name, uint64_t seed, int jobs,
                           char** report_json, int* all_passed);

/* config: {"m","s","dim","gammas":[...],"seed"} */
nclp_status nclp_cmd_moments(const char* config_json, char** report_json, int* passed);
/* config: {"dist":"gaussian"|"exponential"|"two-point","n","p","q","samples","seed"} */
nclp_status nclp_cmd_rosenthal(const char* config_json, char** report_json);
/* config: {"m","alpha_p","beta_p","gamma"} */
nclp_status nclp_cmd_budget(const char* config_json, char** report_json);
/* config: {"theta","grid"}; emits the boundary quadrature grid as CSV. */
nclp_status nclp_cmd_strip(const char* config_json, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* NCLP_H */
