/*
 * C API for the hoptree library: hop-constrained tree models (threshold /
 * partial-ordering and one-hot / assignment formulations), an LP/MIP solver,
 * walk-cut separation, and exact x-space projection certificates.
 *
 * All objects are opaque handles freed with their matching _free function.
 * Functions returning ht_status put their result behind an out pointer and
 * return HT_OK on success; on failure, ht_last_error() describes the problem
 * for the calling thread.
 *
 * Distinct handles may be used from different threads concurrently; sharing
 * one handle across threads requires external synchronization only for
 * _free.
 */
#ifndef HOPTREE_H
#define HOPTREE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    HT_OK = 0,
    HT_ERROR_INVALID_ARGUMENT = 1,
    HT_ERROR_PARSE = 2,
    HT_ERROR_IO = 3,
    HT_ERROR_RESOURCE = 4,
    HT_ERROR_SOLVE = 5,
    HT_ERROR_UNKNOWN = 6
} ht_status;

typedef struct ht_instance ht_instance;
typedef struct ht_model ht_model;
typedef struct ht_lp_result ht_lp_result;
typedef struct ht_mip_result ht_mip_result;

const char* ht_version(void);
/* Message of the most recent failure on this thread; empty string if none. */
const char* ht_last_error(void);
void ht_string_free(char* s);

/* ---- instances ------------------------------------------------------- */

ht_status ht_instance_generate_euclidean(int n, uint64_t seed, int grid, ht_instance** out);
ht_status ht_instance_generate_random(int n, uint64_t seed, int cost_min, int cost_max,
                                      ht_instance** out);
ht_status ht_instance_parse(const char* text, ht_instance** out);
ht_status ht_instance_read_file(const char* path, ht_instance** out);
ht_status ht_instance_to_text(const ht_instance* inst, char** out);
ht_status ht_instance_write_file(const ht_instance* inst, const char* path);
/* Copy with terminals = first floor(n/2) nodes plus the root. */
ht_status ht_instance_derive_hstp_terminals(const ht_instance* inst, ht_instance** out);
/* Copy with a different hop limit. */
ht_status ht_instance_with_hop(const ht_instance* inst, int hop_limit, ht_instance** out);
/* Copy with terminals = all nodes. */
ht_status ht_instance_with_all_terminals(const ht_instance* inst, ht_instance** out);
/* Copy with revenues (one per node) and a budget attached. */
ht_status ht_instance_with_revenues(const ht_instance* inst, const double* revenues,
                                    int node_count, double budget, ht_instance** out);

int ht_instance_node_count(const ht_instance* inst);
int ht_instance_root(const ht_instance* inst);
int ht_instance_hop_limit(const ht_instance* inst);
int ht_instance_edge_count(const ht_instance* inst);
int ht_instance_terminal_count(const ht_instance* inst);
int ht_instance_has_budget(const ht_instance* inst);
void ht_instance_free(ht_instance* inst);

/* ---- model building --------------------------------------------------- */

typedef enum { HT_MODEL_P = 0, HT_MODEL_A = 1 } ht_model_kind;
typedef enum {
    HT_PROBLEM_HT = 0,
    HT_PROBLEM_HSTP = 1,
    HT_PROBLEM_HMSTP = 2,
    HT_PROBLEM_STPRBH = 3
} ht_problem_kind;

ht_status ht_model_build(const ht_instance* inst, ht_model_kind kind, ht_problem_kind problem,
                         ht_model** out);
int ht_model_variable_count(const ht_model* model);
int ht_model_constraint_count(const ht_model* model);
ht_status ht_model_export_lp(const ht_model* model, const char* path);
void ht_model_free(ht_model* model);

/* ---- LP --------------------------------------------------------------- */

typedef enum {
    HT_LP_OPTIMAL = 0,
    HT_LP_INFEASIBLE = 1,
    HT_LP_UNBOUNDED = 2,
    HT_LP_ITERATION_LIMIT = 3
} ht_lp_status;

ht_status ht_solve_lp(const ht_model* model, ht_lp_result** out);
ht_lp_status ht_lp_result_status(const ht_lp_result* res);
double ht_lp_result_objective(const ht_lp_result* res);
int ht_lp_result_iterations(const ht_lp_result* res);
void ht_lp_result_free(ht_lp_result* res);

/* Repeatedly solves the relaxation and adds every violated walk cut until
 * none remains. Writes the final relaxation value and the number of cuts
 * added. Valid formulations of the threshold (P) kind never add a cut. */
ht_status ht_root_cut_loop(const ht_model* model, int max_rounds, double* lp_value,
                           int* cuts_added);

/* ---- MIP --------------------------------------------------------------- */

typedef enum {
    HT_MIP_OPTIMAL = 0,
    HT_MIP_FEASIBLE = 1,
    HT_MIP_INFEASIBLE = 2,
    HT_MIP_TIME_LIMIT = 3
} ht_mip_status;

ht_status ht_solve_mip(const ht_model* model, double time_limit_s, ht_mip_result** out);
ht_mip_status ht_mip_result_status(const ht_mip_result* res);
int ht_mip_result_has_incumbent(const ht_mip_result* res);
double ht_mip_result_incumbent(const ht_mip_result* res);
double ht_mip_result_bound(const ht_mip_result* res);
long ht_mip_result_nodes(const ht_mip_result* res);
double ht_mip_result_wall_seconds(const ht_mip_result* res);
/* Decoded incumbent tree: writes up to cap (tail, head) pairs into pairs
 * (2*cap ints) and returns the arc count, or -1 when there is no decodable
 * incumbent. */
int ht_mip_result_tree_arcs(const ht_mip_result* res, int* pairs, int cap);
void ht_mip_result_free(ht_mip_result* res);

/* ---- polyhedral certificates ------------------------------------------ */

typedef enum {
    HT_INCLUDED = 0,
    HT_COUNTEREXAMPLE = 1,
    HT_INCONCLUSIVE = 2
} ht_inclusion_verdict;

/* HT_DIRECTION_AP asks whether the threshold polytope's x-shadow lies inside
 * the one-hot polytope's x-shadow (project A, validate over P);
 * HT_DIRECTION_PA asks the reverse. */
typedef enum { HT_DIRECTION_AP = 0, HT_DIRECTION_PA = 1 } ht_direction;

ht_status ht_certify_inclusion(const ht_instance* inst, ht_problem_kind problem,
                               ht_direction direction, size_t row_cap,
                               ht_inclusion_verdict* verdict, double* worst_slack,
                               int* rows_checked);

ht_status ht_support_dominance(const ht_instance* inst, ht_problem_kind problem, int trials,
                               uint64_t seed, double* worst_margin);

#ifdef __cplusplus
}
#endif

#endif /* HOPTREE_H */
