#include "hoptree.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hoptree/errors.hpp"
#include "hoptree/formulations.hpp"
#include "hoptree/instance.hpp"
#include "hoptree/lp_format.hpp"
#include "hoptree/polyhedra.hpp"
#include "hoptree/simplex.hpp"

using namespace hoptree;

namespace {

thread_local std::string g_last_error;

ht_status fail(ht_status code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename Fn>
ht_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return HT_OK;
    } catch (const ParseError& e) {
        return fail(HT_ERROR_PARSE, e.what());
    } catch (const InvalidArgument& e) {
        return fail(HT_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const ResourceLimit& e) {
        return fail(HT_ERROR_RESOURCE, e.what());
    } catch (const IoError& e) {
        return fail(HT_ERROR_IO, e.what());
    } catch (const SolveError& e) {
        return fail(HT_ERROR_SOLVE, e.what());
    } catch (const std::exception& e) {
        return fail(HT_ERROR_UNKNOWN, e.what());
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ModelKind to_kind(ht_model_kind k) { return k == HT_MODEL_P ? ModelKind::P : ModelKind::A; }

ProblemKind to_problem(ht_problem_kind p) {
    switch (p) {
        case HT_PROBLEM_HT: return ProblemKind::HT;
        case HT_PROBLEM_HSTP: return ProblemKind::HSTP;
        case HT_PROBLEM_HMSTP: return ProblemKind::HMSTP;
        case HT_PROBLEM_STPRBH: return ProblemKind::STPRBH;
    }
    throw InvalidArgument("unknown problem kind");
}

}  // namespace

struct ht_instance {
    Instance data;
};

struct ht_model {
    HopTreeModel data;
};

struct ht_lp_result {
    LpOutcome data;
};

struct ht_mip_result {
    MipOutcome data;
    std::vector<Arc> tree_arcs;
    bool tree_valid = false;
};

extern "C" {

const char* ht_version(void) { return "1.0.0"; }

const char* ht_last_error(void) { return g_last_error.c_str(); }

void ht_string_free(char* s) { delete[] s; }

ht_status ht_instance_generate_euclidean(int n, uint64_t seed, int grid, ht_instance** out) {
    if (!out) return fail(HT_ERROR_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] { *out = new ht_instance{generate_euclidean(n, seed, grid)}; });
}

ht_status ht_instance_generate_random(int n, uint64_t seed, int cost_min, int cost_max,
                                      ht_instance** out) {
    if (!out) return fail(HT_ERROR_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] { *out = new ht_instance{generate_random(n, seed, cost_min, cost_max)}; });
}

ht_status ht_instance_parse(const char* text, ht_instance** out) {
    if (!text || !out) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new ht_instance{parse_instance(std::string(text))}; });
}

ht_status ht_instance_read_file(const char* path, ht_instance** out) {
    if (!path || !out) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open " + std::string(path));
        *out = new ht_instance{parse_instance(in)};
    });
}

ht_status ht_instance_to_text(const ht_instance* inst, char** out) {
    if (!inst || !out) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = copy_string(write_instance(inst->data)); });
}

ht_status ht_instance_write_file(const ht_instance* inst, const char* path) {
    if (!inst || !path) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ofstream out(path);
        if (!out) throw IoError("cannot open " + std::string(path) + " for writing");
        write_instance(inst->data, out);
        if (!out) throw IoError("write failed for " + std::string(path));
    });
}

ht_status ht_instance_derive_hstp_terminals(const ht_instance* inst, ht_instance** out) {
    if (!inst || !out) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new ht_instance{derive_hstp_terminals(inst->data)}; });
}

ht_status ht_instance_with_hop(const ht_instance* inst, int hop_limit, ht_instance** out) {
    if (!inst || !out) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        Instance copy = inst->data;
        copy.hop_limit = hop_limit;
        copy.validate();
        *out = new ht_instance{std::move(copy)};
    });
}

ht_status ht_instance_with_all_terminals(const ht_instance* inst, ht_instance** out) {
    if (!inst || !out) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        Instance copy = inst->data;
        copy.terminals.clear();
        for (int v = 1; v <= copy.node_count; ++v) copy.terminals.push_back(v);
        *out = new ht_instance{std::move(copy)};
    });
}

ht_status ht_instance_with_revenues(const ht_instance* inst, const double* revenues,
                                    int node_count, double budget, ht_instance** out) {
    if (!inst || !revenues || !out) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        Instance copy = inst->data;
        if (node_count != copy.node_count)
            throw InvalidArgument("revenue array length must equal the node count");
        copy.revenues.assign(revenues, revenues + node_count);
        copy.budget = budget;
        copy.validate();
        *out = new ht_instance{std::move(copy)};
    });
}

int ht_instance_node_count(const ht_instance* inst) { return inst ? inst->data.node_count : 0; }
int ht_instance_root(const ht_instance* inst) { return inst ? inst->data.root : 0; }
int ht_instance_hop_limit(const ht_instance* inst) { return inst ? inst->data.hop_limit : 0; }
int ht_instance_edge_count(const ht_instance* inst) { return inst ? inst->data.edge_count() : 0; }
int ht_instance_terminal_count(const ht_instance* inst) {
    return inst ? static_cast<int>(inst->data.terminals.size()) : 0;
}
int ht_instance_has_budget(const ht_instance* inst) {
    return inst && inst->data.budget ? 1 : 0;
}
void ht_instance_free(ht_instance* inst) { delete inst; }

ht_status ht_model_build(const ht_instance* inst, ht_model_kind kind, ht_problem_kind problem,
                         ht_model** out) {
    if (!inst || !out) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded(
        [&] { *out = new ht_model{build_problem(inst->data, to_kind(kind), to_problem(problem))}; });
}

int ht_model_variable_count(const ht_model* model) {
    return model ? model->data.model.variable_count() : 0;
}
int ht_model_constraint_count(const ht_model* model) {
    return model ? model->data.model.constraint_count() : 0;
}

ht_status ht_model_export_lp(const ht_model* model, const char* path) {
    if (!model || !path) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { write_lp_file(model->data.model, path); });
}

void ht_model_free(ht_model* model) { delete model; }

ht_status ht_solve_lp(const ht_model* model, ht_lp_result** out) {
    if (!model || !out) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new ht_lp_result{solve_lp(relax(model->data.model))}; });
}

ht_lp_status ht_lp_result_status(const ht_lp_result* res) {
    switch (res->data.status) {
        case LpStatus::Optimal: return HT_LP_OPTIMAL;
        case LpStatus::Infeasible: return HT_LP_INFEASIBLE;
        case LpStatus::Unbounded: return HT_LP_UNBOUNDED;
        case LpStatus::IterationLimit: return HT_LP_ITERATION_LIMIT;
    }
    return HT_LP_ITERATION_LIMIT;
}
double ht_lp_result_objective(const ht_lp_result* res) { return res->data.objective; }
int ht_lp_result_iterations(const ht_lp_result* res) { return res->data.iterations; }
void ht_lp_result_free(ht_lp_result* res) { delete res; }

ht_status ht_root_cut_loop(const ht_model* model, int max_rounds, double* lp_value,
                           int* cuts_added) {
    if (!model || !lp_value || !cuts_added) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const RootCutLoopResult res = root_cut_loop(model->data, max_rounds);
        *lp_value = res.lp_value;
        *cuts_added = res.cuts_added;
    });
}

ht_status ht_solve_mip(const ht_model* model, double time_limit_s, ht_mip_result** out) {
    if (!model || !out) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        MipLimits limits;
        limits.time_limit_s = time_limit_s;
        auto* res = new ht_mip_result{solve_mip(model->data.model, limits), {}, false};
        if (res->data.has_incumbent) {
            try {
                const DecodedTree tree = decode_tree(model->data, res->data.point, 1e-6);
                res->tree_arcs.assign(tree.arcs.begin(), tree.arcs.end());
                res->tree_valid = true;
            } catch (const SolveError&) {
                res->tree_valid = false;
            }
        }
        *out = res;
    });
}

ht_mip_status ht_mip_result_status(const ht_mip_result* res) {
    switch (res->data.status) {
        case MipStatus::Optimal: return HT_MIP_OPTIMAL;
        case MipStatus::Feasible: return HT_MIP_FEASIBLE;
        case MipStatus::Infeasible: return HT_MIP_INFEASIBLE;
        case MipStatus::TimeLimit: return HT_MIP_TIME_LIMIT;
    }
    return HT_MIP_INFEASIBLE;
}
int ht_mip_result_has_incumbent(const ht_mip_result* res) {
    return res->data.has_incumbent ? 1 : 0;
}
double ht_mip_result_incumbent(const ht_mip_result* res) { return res->data.incumbent; }
double ht_mip_result_bound(const ht_mip_result* res) { return res->data.bound; }
long ht_mip_result_nodes(const ht_mip_result* res) { return res->data.nodes; }
double ht_mip_result_wall_seconds(const ht_mip_result* res) { return res->data.wall_seconds; }

int ht_mip_result_tree_arcs(const ht_mip_result* res, int* pairs, int cap) {
    if (!res || !res->tree_valid) return -1;
    const int count = static_cast<int>(res->tree_arcs.size());
    if (pairs) {
        const int limit = std::min(count, cap);
        for (int i = 0; i < limit; ++i) {
            pairs[2 * i] = res->tree_arcs[i].tail;
            pairs[2 * i + 1] = res->tree_arcs[i].head;
        }
    }
    return count;
}

void ht_mip_result_free(ht_mip_result* res) { delete res; }

ht_status ht_certify_inclusion(const ht_instance* inst, ht_problem_kind problem,
                               ht_direction direction, size_t row_cap,
                               ht_inclusion_verdict* verdict, double* worst_slack,
                               int* rows_checked) {
    if (!inst || !verdict || !worst_slack || !rows_checked)
        return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const HopTreeModel a = build_problem(inst->data, ModelKind::A, to_problem(problem));
        const HopTreeModel p = build_problem(inst->data, ModelKind::P, to_problem(problem));
        const InclusionReport report = direction == HT_DIRECTION_AP
                                           ? certify_inclusion(a, p, 1e-7, row_cap)
                                           : certify_inclusion(p, a, 1e-7, row_cap);
        switch (report.verdict) {
            case InclusionVerdict::Included: *verdict = HT_INCLUDED; break;
            case InclusionVerdict::CounterexampleFound: *verdict = HT_COUNTEREXAMPLE; break;
            case InclusionVerdict::Inconclusive: *verdict = HT_INCONCLUSIVE; break;
        }
        *worst_slack = report.worst_slack;
        *rows_checked = report.checked_rows;
    });
}

ht_status ht_support_dominance(const ht_instance* inst, ht_problem_kind problem, int trials,
                               uint64_t seed, double* worst_margin) {
    if (!inst || !worst_margin) return fail(HT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const HopTreeModel a = build_problem(inst->data, ModelKind::A, to_problem(problem));
        const HopTreeModel p = build_problem(inst->data, ModelKind::P, to_problem(problem));
        *worst_margin = support_dominance(a, p, trials, seed);
    });
}

}  // extern "C"
