#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hoptree/formulations.hpp"
#include "hoptree/model.hpp"

namespace hoptree {

enum class RowSense : std::uint8_t { Le, Eq };

/// One inequality (or equality) with exact rational data. Rows keep integer
/// coefficients with content gcd 1 at creation; derived rows stay integral
/// because combinations always use integer multipliers.
///
/// Provenance references *oriented* originals: id 2k is original row k as
/// stored, id 2k+1 is its negation (only used for equalities, which are
/// valid with either orientation). Weights are nonnegative integers, so any
/// derived inequality is a nonnegative integer combination of oriented
/// original rows and can be recomputed exactly.
struct RationalRow {
    std::vector<mpq_class> coef;  // dense over the system directory
    RowSense sense = RowSense::Le;
    mpq_class rhs;
    std::map<int, mpz_class> provenance;
};

struct RationalSystem {
    std::vector<VarKey> directory;
    std::vector<RationalRow> rows;
    std::vector<RationalRow> originals;  // frozen at rationalize() time

    int column(const VarKey& key) const;
    bool column_used(int col) const;

    /// Exact recomputation of the provenance combination of a row; true iff
    /// it reproduces the stored coefficients, sense and rhs.
    bool provenance_consistent(const RationalRow& row) const;
};

/// Model -> rational system: Le rows as-is, Ge rows negated, Eq rows kept as
/// equalities, plus two bound rows per variable. Coefficients must be exact
/// binary rationals (ours are integers).
RationalSystem rationalize(const Model& m);

/// Eliminates one variable. If an equality mentions it, Gaussian
/// substitution through that pivot row; otherwise the positive/negative
/// inequality combination. Tautologies, duplicates and same-LHS dominated
/// rows are pruned. `row_cap` bounds the intermediate row count.
RationalSystem fme_eliminate(const RationalSystem& s, const VarKey& v,
                             std::size_t row_cap = 200000);

/// Eliminates every non-X column, greedily choosing the cheapest variable
/// (fewest positive*negative products) at each step.
RationalSystem project_x(const RationalSystem& s, std::size_t row_cap = 200000);

enum class InclusionVerdict : std::uint8_t { Included, CounterexampleFound, Inconclusive };

struct InclusionReport {
    InclusionVerdict verdict = InclusionVerdict::Inconclusive;
    int checked_rows = 0;
    double worst_slack = 0.0;
    std::optional<Point> counterexample;
};

/// Certifies inner_X included in outer_X: projects `outer` onto the x
/// variables exactly, then maximizes each projected row over the relaxation
/// of `inner`. Rows mention only shared x variables, so validity over the
/// inner polytope equals validity over its shadow.
InclusionReport certify_inclusion(const HopTreeModel& outer, const HopTreeModel& inner,
                                  double tol = 1e-7, std::size_t row_cap = 200000);

/// Necessary-condition sampler for the same inclusion: for random unit
/// objective directions over the x space, max over outer minus max over
/// inner. Inclusion implies every margin >= 0 up to LP tolerance.
double support_dominance(const HopTreeModel& outer, const HopTreeModel& inner, int trials,
                         std::uint64_t seed);

/// Checks the single-sink walk-family bound: with only the indegree rows and
/// x bounds, sum of x over the walks <= total length - family size + 1.
/// Preconditions (shared end node; each pair of walks meets in a node with
/// two distinct incoming arcs) are validated and violations throw
/// InvalidArgument naming the offending pair.
bool walk_family_bound_check(const Instance& inst, const std::vector<Walk>& walks);

}  // namespace hoptree
