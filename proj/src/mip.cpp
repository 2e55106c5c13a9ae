#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "hoptree/errors.hpp"
#include "hoptree/simplex.hpp"

namespace hoptree {

namespace {

constexpr double kIntTol = 1e-6;

struct BoundChange {
    int col;
    double lo, hi;
    std::shared_ptr<const BoundChange> parent;
};

struct Node {
    double bound;  // parent LP value, internal (min) sense
    long seq;
    std::shared_ptr<const BoundChange> changes;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // best bound first
        return a.seq > b.seq;                              // FIFO tie-break
    }
};

void materialize_bounds(const detail::PreparedLp& prep, const Node& node, std::vector<double>& lo,
                        std::vector<double>& hi) {
    lo = prep.lo;
    hi = prep.hi;
    for (const BoundChange* c = node.changes.get(); c != nullptr; c = c->parent.get()) {
        lo[c->col] = std::max(lo[c->col], c->lo);
        hi[c->col] = std::min(hi[c->col], c->hi);
    }
}

// Most-fractional integer column; ties broken by lowest column index.
int pick_branch_column(const detail::PreparedLp& prep, const LpOutcome& lp) {
    int best = -1;
    double best_score = kIntTol;
    for (int j = 0; j < prep.n_struct; ++j) {
        if (!prep.integral[j]) continue;
        const double v = lp.point.at(prep.keys[j]);
        const double frac = v - std::floor(v);
        const double score = std::min(frac, 1.0 - frac);
        if (score > best_score) {
            best = j;
            best_score = score;
        }
    }
    return best;
}

// True when every integer solution has an integer objective value: the
// objective touches only integer columns and all its coefficients (and the
// constant) are integers. Lets the search round node bounds up.
bool integral_objective(const Model& m, const detail::PreparedLp& prep) {
    if (m.objective().constant != std::floor(m.objective().constant)) return false;
    for (const auto& [key, coeff] : m.objective().terms) {
        if (coeff != std::floor(coeff)) return false;
        if (!prep.integral[m.column(key)]) return false;
    }
    return true;
}

struct Incumbent {
    bool found = false;
    double value = std::numeric_limits<double>::infinity();  // internal sense
    Point point;
};

// Snap integer coordinates and re-price so integer-cost optima are exact.
void offer_incumbent(const Model& m, const detail::PreparedLp& prep, const LpOutcome& lp,
                     double sign, Incumbent& incumbent) {
    Point snapped = lp.point;
    for (int j = 0; j < prep.n_struct; ++j)
        if (prep.integral[j]) snapped.set(prep.keys[j], std::round(lp.point.at(prep.keys[j])));
    const double value = sign * evaluate_objective(m, snapped);
    if (value < incumbent.value) {
        incumbent.found = true;
        incumbent.value = value;
        incumbent.point = std::move(snapped);
    }
}

// LP-guided fractional diving: fix the least fractional integer column to
// its rounded value, re-solve, repeat; one flip retry when a fix kills
// feasibility. Purely a source of incumbents; the tree search below stays
// best-bound.
void dive_for_incumbent(const Model& m, const detail::PreparedLp& prep,
                        const std::vector<double>& lo0, const std::vector<double>& hi0,
                        const SolveOptions& opts, double sign, Incumbent& incumbent) {
    std::vector<double> lo = lo0, hi = hi0;
    int last_fixed = -1;
    bool flipped = false;
    for (int round = 0; round < 200; ++round) {
        const LpOutcome lp = detail::solve_prepared(prep, lo, hi, opts);
        if (lp.status != LpStatus::Optimal) {
            if (last_fixed < 0 || flipped) return;
            // retry the previous fix at its other bound
            const double other = lo[last_fixed] == lo0[last_fixed]
                                     ? hi0[last_fixed]
                                     : lo0[last_fixed];
            lo[last_fixed] = hi[last_fixed] = other;
            flipped = true;
            continue;
        }
        if (incumbent.found && sign * lp.objective >= incumbent.value) return;
        int least_fractional = -1;
        double least_score = 1.0;
        for (int j = 0; j < prep.n_struct; ++j) {
            if (!prep.integral[j] || lo[j] == hi[j]) continue;
            const double v = lp.point.at(prep.keys[j]);
            const double frac = v - std::floor(v);
            const double score = std::min(frac, 1.0 - frac);
            if (score > kIntTol && score < least_score) {
                least_score = score;
                least_fractional = j;
            }
        }
        if (least_fractional < 0) {
            offer_incumbent(m, prep, lp, sign, incumbent);
            return;
        }
        const double v = lp.point.at(prep.keys[least_fractional]);
        lo[least_fractional] = hi[least_fractional] = std::round(v);
        last_fixed = least_fractional;
        flipped = false;
    }
}

}  // namespace

MipOutcome solve_mip(const Model& m, const MipLimits& limits, const SolveOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    const detail::PreparedLp prep = detail::prepare(m);
    const double sign = prep.maximize ? -1.0 : 1.0;  // internal values are min-sense
    const bool integer_valued = integral_objective(m, prep);
    // With an integral objective a node whose bound rounds up to the
    // incumbent cannot contain anything better.
    const auto prunable = [&](double bound, double incumbent_value) {
        if (bound >= incumbent_value - limits.gap_tol) return true;
        return integer_valued && std::ceil(bound - 1e-9) >= incumbent_value - limits.gap_tol;
    };

    MipOutcome out;
    bool hit_time_limit = false;
    bool lp_trouble = false;
    Incumbent incumbent;

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long seq = 0;
    open.push(Node{-std::numeric_limits<double>::infinity(), seq++, nullptr});

    std::vector<double> lo, hi;
    while (!open.empty()) {
        if (elapsed() > limits.time_limit_s) {
            hit_time_limit = true;
            break;
        }
        const Node node = open.top();
        if (prunable(node.bound, incumbent.value)) break;  // best-first: the rest follow
        open.pop();
        ++out.nodes;

        materialize_bounds(prep, node, lo, hi);
        const LpOutcome lp = detail::solve_prepared(prep, lo, hi, opts);
        if (lp.status == LpStatus::Infeasible) continue;
        if (lp.status != LpStatus::Optimal) {
            lp_trouble = true;
            break;
        }
        const double value = sign * lp.objective;  // internal sense, incl. constant
        if (prunable(value, incumbent.value)) continue;

        const int branch_col = pick_branch_column(prep, lp);
        if (branch_col < 0) {
            offer_incumbent(m, prep, lp, sign, incumbent);
            continue;
        }
        if (out.nodes == 1) dive_for_incumbent(m, prep, lo, hi, opts, sign, incumbent);

        const double v = lp.point.at(prep.keys[branch_col]);
        auto down = std::make_shared<BoundChange>(
            BoundChange{branch_col, prep.lo[branch_col], std::floor(v), node.changes});
        auto up = std::make_shared<BoundChange>(
            BoundChange{branch_col, std::ceil(v), prep.hi[branch_col], node.changes});
        open.push(Node{value, seq++, std::move(down)});
        open.push(Node{value, seq++, std::move(up)});
    }

    double best_open = std::numeric_limits<double>::infinity();
    if (!open.empty()) best_open = open.top().bound;
    const double internal_bound = std::min(incumbent.value, best_open);

    out.wall_seconds = elapsed();
    out.has_incumbent = incumbent.found;
    if (out.has_incumbent) {
        out.incumbent = sign * incumbent.value;
        out.point = std::move(incumbent.point);
    }
    if (hit_time_limit) {
        out.status = MipStatus::TimeLimit;
        out.bound = std::isfinite(internal_bound) ? sign * internal_bound
                                                  : -sign * std::numeric_limits<double>::infinity();
    } else if (lp_trouble) {
        if (!out.has_incumbent)
            throw SolveError("a node relaxation stopped at its iteration limit");
        out.status = MipStatus::Feasible;
        out.bound = std::isfinite(internal_bound) ? sign * internal_bound : out.incumbent;
    } else if (!out.has_incumbent) {
        out.status = MipStatus::Infeasible;
    } else {
        out.status = MipStatus::Optimal;
        out.bound = out.incumbent;
    }
    return out;
}

}  // namespace hoptree
