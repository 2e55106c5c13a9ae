#pragma once

#include <map>
#include <set>
#include <vector>

#include "hoptree/instance.hpp"
#include "hoptree/model.hpp"

namespace hoptree {

enum class ModelKind : std::uint8_t { P, A };
enum class ProblemKind : std::uint8_t { HT, HSTP, HMSTP, STPRBH };

/// A hop-constrained-tree ILP over an instance. P uses threshold variables
/// l[v,i] / g[v,i]; A uses one-hot level variables y[v,i]. Both share the
/// arc variables x[u,v].
struct HopTreeModel {
    ModelKind kind = ModelKind::P;
    Instance instance;
    Model model;
};

/// Threshold (partial-ordering) formulation. Families: F-root, F-interval,
/// F-mono, F-excl, F-arc, F-indeg, F-outdeg. Levels run 0..H; the root and
/// interval fixings are kept as equality rows rather than substituted out.
HopTreeModel build_pht(const Instance& inst);

/// One-hot (assignment) formulation. Families: F-rootY, F-rootYi, F-zeroY0,
/// F-assign, F-arcdir, F-arcdirH, F-indeg, F-outdeg. Requires H >= 1 when
/// the instance has non-root nodes.
HopTreeModel build_aht(const Instance& inst);

/// Adds the terminal covering rows (F-term) and the arc-cost minimization
/// objective. Terminals = all nodes gives the spanning special case.
HopTreeModel apply_hstp(const HopTreeModel& m, const Instance& inst);

/// Adds the budget row (F-budget) and the revenue maximization objective.
/// Requires revenues and budget on the instance.
HopTreeModel apply_stprbh(const HopTreeModel& m, const Instance& inst);

/// Convenience: build kind + problem in one step. HMSTP forces terminals =
/// all nodes; HT leaves the model without objective or problem rows.
HopTreeModel build_problem(const Instance& inst, ModelKind kind, ProblemKind problem);

/// y[v,i] = 1 - (l[v,i] + g[v,i]) for every (v,i) pair present in the point;
/// x values are copied through. Total on its domain; feasibility is a
/// separate question.
Point pop_to_assignment(const Point& p);

/// Inverse via prefix sums: l[v,i] = sum_{j<i} y[v,j], g[v,i] = sum_{j>i}
/// y[v,j]. Exact inverse whenever each node's y row sums to 1.
Point assignment_to_pop(const Point& p);

struct DecodedTree {
    std::set<Arc> arcs;
    std::map<int, int> depth;  // includes the root at depth 0

    int max_depth() const;
};

/// Reads the arcs with x > 1-tol, checks they form an arborescence rooted at
/// the instance root with depth <= H, and returns it. A failed check throws
/// SolveError: it signals an unsound formulation, not bad input.
DecodedTree decode_tree(const HopTreeModel& m, const Point& p, double tol);

/// The walk inequality: for a walk with exactly H arcs not starting at the
/// root, at most H-1 of its arcs can be selected. Repeated arcs accumulate
/// coefficients.
Constraint walk_cut(const Walk& w, int hop_limit, int root);

struct SeparatedCut {
    Walk walk;
    double violation = 0.0;
};

/// Exact separation of the walk inequalities by layered dynamic programming
/// over walk length. Returns one most-violated walk per start node, sorted
/// by violation (descending) with lexicographic node-sequence tie-break; an
/// empty result certifies that no walk inequality is violated beyond tol.
std::vector<SeparatedCut> separate_walk_cuts(const Instance& inst, const Point& p, double tol);

struct RootCutLoopResult {
    double lp_value = 0.0;
    int cuts_added = 0;
    int rounds = 0;
};

/// Re-solves the relaxation, adding every separated walk cut, until none is
/// violated. The threshold model satisfies every walk cut, so zero cuts get
/// added; callers treat a nonzero count on P as an invariant failure.
RootCutLoopResult root_cut_loop(const HopTreeModel& m, int max_rounds = 50);

}  // namespace hoptree
