#pragma once

#include <vector>

#include "hoptree/model.hpp"

namespace hoptree {

enum class LpStatus : std::uint8_t { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpOutcome {
    LpStatus status = LpStatus::IterationLimit;
    double objective = 0.0;  // stated model sense
    Point point;             // structural values (Optimal only)
    int iterations = 0;
    /// One multiplier per model constraint (Optimal only), stated sense:
    /// objective == sum duals*rhs + sum reduced_cost*bound over nonbasic
    /// columns. The tests recompute reduced costs from the model to certify
    /// the reported value by weak duality.
    std::vector<double> row_duals;
};

struct SolveOptions {
    double pivot_tol = 1e-7;   // minimum pivot magnitude / ratio-test cutoff
    double dual_tol = 1e-7;    // reduced-cost optimality threshold
    double feas_tol = 1e-7;    // phase-1 acceptance per unit of |rhs|
    long iteration_limit = 0;  // 0 = automatic
    int refactor_every = 100;
    int stall_threshold = 300;  // degenerate steps before Bland's rule engages
    bool substitute_fixed = false;  // presolve singleton-equality fixings
};

/// Bounded-variable primal simplex. Requires finite bounds on every model
/// variable (all ours are [0,1]). Deterministic: fixed tie-breaking, no
/// randomized or time-dependent choices.
LpOutcome solve_lp(const Model& m, const SolveOptions& opts = {});

/// Replaces the objective with max(expr), drops integrality, solves.
LpOutcome maximize_expr_over(const Model& m, const LinearTerms& expr,
                             const SolveOptions& opts = {});

enum class MipStatus : std::uint8_t { Optimal, Feasible, Infeasible, TimeLimit };

struct MipLimits {
    double time_limit_s = 60.0;
    double gap_tol = 1e-6;  // absolute
};

struct MipOutcome {
    MipStatus status = MipStatus::Infeasible;
    bool has_incumbent = false;
    double incumbent = 0.0;  // stated sense
    double bound = 0.0;      // dual bound, stated sense
    Point point;
    long nodes = 0;
    double wall_seconds = 0.0;
};

/// Branch-and-bound: best-bound node selection (FIFO tie-break), branching
/// on the most-fractional integer variable (ties: lowest column index).
/// Integral incumbents are snapped to exact integers and re-priced, so
/// integer-cost optima are reported exactly.
MipOutcome solve_mip(const Model& m, const MipLimits& limits = {},
                     const SolveOptions& opts = {});

namespace detail {

/// Model data converted once into solver form; bounds are supplied per
/// solve so the branch-and-bound can revisit the same matrix cheaply.
struct PreparedLp {
    int n_struct = 0;
    int rows = 0;
    bool maximize = false;
    double obj_constant = 0.0;
    std::vector<double> cost;  // structural, minimization sign
    std::vector<std::vector<std::pair<int, double>>> cols;  // structural sparse columns
    std::vector<double> rhs;
    std::vector<Sense> senses;
    std::vector<VarKey> keys;
    std::vector<double> lo, hi;
    std::vector<char> integral;
};

PreparedLp prepare(const Model& m);
LpOutcome solve_prepared(const PreparedLp& prep, const std::vector<double>& lo,
                         const std::vector<double>& hi, const SolveOptions& opts);

}  // namespace detail

}  // namespace hoptree
