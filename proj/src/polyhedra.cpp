#include "hoptree/polyhedra.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hoptree/errors.hpp"
#include "hoptree/rng.hpp"
#include "hoptree/simplex.hpp"

namespace hoptree {

namespace {

mpq_class exact_rational(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("non-finite coefficient cannot be rationalized");
    return mpq_class(x);  // exact binary expansion
}

// Scale a row in place so all coefficients and the rhs are integers with
// content gcd 1. Positive scaling only, so inequality direction is kept.
void normalize_primitive(RationalRow& row) {
    mpz_class lcm_den = 1;
    for (const mpq_class& c : row.coef) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), row.rhs.get_den().get_mpz_t());
    if (lcm_den != 1) {
        for (mpq_class& c : row.coef) c *= lcm_den;
        row.rhs *= lcm_den;
    }
    mpz_class content = 0;
    for (const mpq_class& c : row.coef)
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), row.rhs.get_num().get_mpz_t());
    if (content > 1) {
        for (mpq_class& c : row.coef) c /= content;
        row.rhs /= content;
    }
    for (mpq_class& c : row.coef) c.canonicalize();
    row.rhs.canonicalize();
}

void add_scaled(RationalRow& target, const RationalRow& source, const mpz_class& factor) {
    for (std::size_t i = 0; i < target.coef.size(); ++i)
        target.coef[i] += factor * source.coef[i];
    target.rhs += factor * source.rhs;
    for (const auto& [id, w] : source.provenance) target.provenance[id] += factor * w;
}

void scale_row(RationalRow& row, const mpz_class& factor) {
    for (mpq_class& c : row.coef) c *= factor;
    row.rhs *= factor;
    for (auto& [id, w] : row.provenance) w *= factor;
}

// Canonical duplicate key: coefficient vector scaled to primitive integers.
std::string lhs_key(const RationalRow& row) {
    RationalRow tmp;
    tmp.coef = row.coef;
    tmp.rhs = 0;
    mpz_class lcm_den = 1;
    for (const mpq_class& c : tmp.coef)
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_class content = 0;
    for (mpq_class& c : tmp.coef) {
        c *= lcm_den;
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_num().get_mpz_t());
    }
    std::ostringstream key;
    for (const mpq_class& c : tmp.coef) {
        if (content > 1)
            key << mpq_class(c / content).get_str() << '|';
        else
            key << c.get_str() << '|';
    }
    return key.str();
}

mpq_class scaled_rhs(const RationalRow& row) {
    // rhs divided by the positive content of the coefficient vector, so rows
    // with equal lhs_key have directly comparable right-hand sides.
    mpz_class lcm_den = 1;
    for (const mpq_class& c : row.coef)
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_class content = 0;
    for (const mpq_class& c : row.coef) {
        mpq_class s = c * lcm_den;
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), s.get_num().get_mpz_t());
    }
    mpq_class rhs = row.rhs * lcm_den;
    if (content > 1) rhs /= content;
    rhs.canonicalize();
    return rhs;
}

bool is_zero_row(const RationalRow& row) {
    for (const mpq_class& c : row.coef)
        if (c != 0) return false;
    return true;
}

// Drop tautologies and, among rows with identical normalized lhs, keep only
// the tightest. An all-zero row with negative rhs (infeasible system) is
// kept so downstream consumers see it.
std::vector<RationalRow> prune(std::vector<RationalRow> rows) {
    std::vector<RationalRow> out;
    std::map<std::string, std::size_t> best;  // lhs key -> index in out
    for (RationalRow& row : rows) {
        if (is_zero_row(row)) {
            if (row.sense == RowSense::Le ? row.rhs >= 0 : row.rhs == 0) continue;
            out.push_back(std::move(row));
            continue;
        }
        if (row.sense == RowSense::Eq) {
            out.push_back(std::move(row));
            continue;
        }
        const std::string key = lhs_key(row);
        auto it = best.find(key);
        if (it == best.end()) {
            best.emplace(key, out.size());
            out.push_back(std::move(row));
        } else if (out[it->second].sense == RowSense::Le &&
                   scaled_rhs(row) < scaled_rhs(out[it->second])) {
            out[it->second] = std::move(row);
        }
    }
    return out;
}

}  // namespace

int RationalSystem::column(const VarKey& key) const {
    for (std::size_t i = 0; i < directory.size(); ++i)
        if (directory[i] == key) return static_cast<int>(i);
    throw InvalidArgument("rational system has no column " + key.name());
}

bool RationalSystem::column_used(int col) const {
    for (const RationalRow& row : rows)
        if (row.coef[col] != 0) return true;
    return false;
}

bool RationalSystem::provenance_consistent(const RationalRow& row) const {
    RationalRow sum;
    sum.coef.assign(directory.size(), 0);
    sum.rhs = 0;
    for (const auto& [oriented_id, weight] : row.provenance) {
        if (weight < 0) return false;
        const RationalRow& base = originals[oriented_id / 2];
        const bool flipped = oriented_id % 2 == 1;
        if (flipped && base.sense != RowSense::Eq) return false;
        const mpz_class f = flipped ? mpz_class(-weight) : weight;
        for (std::size_t i = 0; i < sum.coef.size(); ++i) sum.coef[i] += f * base.coef[i];
        sum.rhs += f * base.rhs;
    }
    for (std::size_t i = 0; i < sum.coef.size(); ++i)
        if (sum.coef[i] != row.coef[i]) return false;
    return sum.rhs == row.rhs;
}

RationalSystem rationalize(const Model& m) {
    RationalSystem sys;
    for (const Variable& v : m.variables()) sys.directory.push_back(v.key);
    const auto cols = [&](const LinearTerms& terms) {
        std::vector<mpq_class> coef(sys.directory.size(), 0);
        for (const auto& [key, c] : terms) coef[m.column(key)] += exact_rational(c);
        return coef;
    };
    for (const Constraint& c : m.constraints()) {
        RationalRow row;
        row.coef = cols(c.terms);
        row.rhs = exact_rational(c.rhs);
        row.sense = c.sense == Sense::Eq ? RowSense::Eq : RowSense::Le;
        if (c.sense == Sense::Ge) {
            for (mpq_class& q : row.coef) q = -q;
            row.rhs = -row.rhs;
        }
        normalize_primitive(row);
        sys.rows.push_back(std::move(row));
    }
    for (const Variable& v : m.variables()) {
        RationalRow lo_row;
        lo_row.coef.assign(sys.directory.size(), 0);
        lo_row.coef[m.column(v.key)] = -1;
        lo_row.rhs = -exact_rational(v.lo);
        normalize_primitive(lo_row);
        sys.rows.push_back(std::move(lo_row));
        RationalRow hi_row;
        hi_row.coef.assign(sys.directory.size(), 0);
        hi_row.coef[m.column(v.key)] = 1;
        hi_row.rhs = exact_rational(v.hi);
        normalize_primitive(hi_row);
        sys.rows.push_back(std::move(hi_row));
    }
    for (std::size_t i = 0; i < sys.rows.size(); ++i)
        sys.rows[i].provenance = {{static_cast<int>(2 * i), mpz_class(1)}};
    sys.originals = sys.rows;
    return sys;
}

RationalSystem fme_eliminate(const RationalSystem& s, const VarKey& v, std::size_t row_cap) {
    const int col = s.column(v);
    RationalSystem out;
    out.directory = s.directory;
    out.originals = s.originals;

    // Gaussian substitution when an equality pins the variable.
    int eq_pivot = -1;
    for (std::size_t i = 0; i < s.rows.size(); ++i)
        if (s.rows[i].sense == RowSense::Eq && s.rows[i].coef[col] != 0) {
            eq_pivot = static_cast<int>(i);
            break;
        }
    if (eq_pivot >= 0) {
        const RationalRow& pivot = s.rows[eq_pivot];
        const mpz_class p_num = pivot.coef[col].get_num();  // integer rows
        std::vector<RationalRow> rows;
        for (std::size_t i = 0; i < s.rows.size(); ++i) {
            if (static_cast<int>(i) == eq_pivot) continue;
            RationalRow row = s.rows[i];
            if (row.coef[col] != 0) {
                // row_factor * row + pivot_factor * pivot cancels the column;
                // row_factor stays positive so inequality senses survive.
                const mpz_class r_num = row.coef[col].get_num();
                mpz_class g;
                mpz_gcd(g.get_mpz_t(), p_num.get_mpz_t(), r_num.get_mpz_t());
                const mpz_class row_factor = abs(p_num / g);
                const mpz_class pivot_factor = -(row_factor * r_num) / p_num;
                scale_row(row, row_factor);
                const mpz_class weight = abs(pivot_factor);
                for (std::size_t i2 = 0; i2 < row.coef.size(); ++i2)
                    row.coef[i2] += pivot_factor * pivot.coef[i2];
                row.rhs += pivot_factor * pivot.rhs;
                // The pivot is an equality, so a negative multiplier maps to
                // the mirrored orientation of its provenance ids.
                for (const auto& [id, w] : pivot.provenance) {
                    const int oid = pivot_factor >= 0 ? id : (id % 2 == 0 ? id + 1 : id - 1);
                    row.provenance[oid] += weight * w;
                }
            }
            rows.push_back(std::move(row));
        }
        out.rows = prune(std::move(rows));
        if (out.rows.size() > row_cap)
            throw ResourceLimit("projection exceeded the row cap; use a smaller instance");
        return out;
    }

    std::vector<const RationalRow*> zero, pos, neg;
    for (const RationalRow& row : s.rows) {
        if (row.coef[col] == 0)
            zero.push_back(&row);
        else if (row.coef[col] > 0)
            pos.push_back(&row);
        else
            neg.push_back(&row);
    }
    if (zero.size() + pos.size() * neg.size() > row_cap)
        throw ResourceLimit("projection exceeded the row cap; use a smaller instance");

    std::vector<RationalRow> rows;
    rows.reserve(zero.size() + pos.size() * neg.size());
    for (const RationalRow* row : zero) rows.push_back(*row);
    for (const RationalRow* p : pos)
        for (const RationalRow* n : neg) {
            const mpz_class a = p->coef[col].get_num();   // > 0
            const mpz_class b = -n->coef[col].get_num();  // > 0
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            RationalRow combo = *p;
            scale_row(combo, b / g);
            add_scaled(combo, *n, a / g);
            rows.push_back(std::move(combo));
        }
    out.rows = prune(std::move(rows));
    if (out.rows.size() > row_cap)
        throw ResourceLimit("projection exceeded the row cap; use a smaller instance");
    return out;
}

RationalSystem project_x(const RationalSystem& s, std::size_t row_cap) {
    RationalSystem cur = s;
    while (true) {
        int best_col = -1;
        long best_score = 0;
        bool best_has_eq = false;
        for (std::size_t c = 0; c < cur.directory.size(); ++c) {
            if (cur.directory[c].family == VarFamily::X) continue;
            long np = 0, nn = 0;
            bool has_eq = false, used = false;
            for (const RationalRow& row : cur.rows) {
                if (row.coef[c] == 0) continue;
                used = true;
                if (row.sense == RowSense::Eq) has_eq = true;
                if (row.coef[c] > 0)
                    ++np;
                else
                    ++nn;
            }
            if (!used) continue;
            // Equality substitution removes rows; treat as cheapest.
            const long score = has_eq ? -1 : np * nn;
            if (best_col < 0 || score < best_score) {
                best_col = static_cast<int>(c);
                best_score = score;
                best_has_eq = has_eq;
            }
        }
        (void)best_has_eq;
        if (best_col < 0) return cur;
        cur = fme_eliminate(cur, cur.directory[best_col], row_cap);
    }
}

namespace {

// Rows of a projected system restated over the model's x variables, reduced
// to primitive integers so the float LP sees well-scaled data.
struct XRow {
    LinearTerms terms;
    double rhs;
    bool equality;
};

std::vector<XRow> x_rows(const RationalSystem& sys) {
    std::vector<XRow> out;
    for (const RationalRow& row : sys.rows) {
        RationalRow reduced = row;
        normalize_primitive(reduced);
        XRow xr;
        xr.equality = row.sense == RowSense::Eq;
        xr.rhs = reduced.rhs.get_d();
        for (std::size_t c = 0; c < sys.directory.size(); ++c) {
            if (reduced.coef[c] == 0) continue;
            if (sys.directory[c].family != VarFamily::X)
                throw SolveError("projected system still mentions a non-x column");
            xr.terms.emplace_back(sys.directory[c], reduced.coef[c].get_d());
        }
        out.push_back(std::move(xr));
    }
    return out;
}

}  // namespace

InclusionReport certify_inclusion(const HopTreeModel& outer, const HopTreeModel& inner,
                                  double tol, std::size_t row_cap) {
    InclusionReport report;
    RationalSystem projected;
    try {
        projected = project_x(rationalize(relax(outer.model)), row_cap);
    } catch (const ResourceLimit&) {
        report.verdict = InclusionVerdict::Inconclusive;
        return report;
    }
    const Model inner_relaxed = relax(inner.model);
    report.worst_slack = std::numeric_limits<double>::infinity();
    for (const XRow& row : x_rows(projected)) {
        ++report.checked_rows;
        if (row.terms.empty()) {
            const double slack = row.equality ? -std::abs(row.rhs) : row.rhs;
            report.worst_slack = std::min(report.worst_slack, slack);
            if (slack < -tol) {
                report.verdict = InclusionVerdict::CounterexampleFound;
                return report;
            }
            continue;
        }
        const int passes = row.equality ? 2 : 1;
        for (int pass = 0; pass < passes; ++pass) {
            LinearTerms expr = row.terms;
            double rhs = row.rhs;
            if (pass == 1) {  // equality: also validate the >= side
                for (auto& [key, c] : expr) c = -c;
                rhs = -rhs;
            }
            const LpOutcome lp = maximize_expr_over(inner_relaxed, expr);
            if (lp.status != LpStatus::Optimal)
                throw SolveError("validity LP did not solve during certification");
            const double slack = rhs - lp.objective;
            report.worst_slack = std::min(report.worst_slack, slack);
            if (slack < -tol) {
                report.verdict = InclusionVerdict::CounterexampleFound;
                report.counterexample = lp.point;
                return report;
            }
        }
    }
    report.verdict = InclusionVerdict::Included;
    return report;
}

double support_dominance(const HopTreeModel& outer, const HopTreeModel& inner, int trials,
                         std::uint64_t seed) {
    if (trials < 1) throw InvalidArgument("support_dominance needs at least one trial");
    std::vector<VarKey> xs;
    for (const Variable& v : outer.model.variables())
        if (v.key.family == VarFamily::X) xs.push_back(v.key);
    const Model outer_relaxed = relax(outer.model);
    const Model inner_relaxed = relax(inner.model);
    SplitMix64 rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        LinearTerms dir;
        double norm2 = 0.0;
        for (const VarKey& key : xs) {
            const double c = rng.uniform01() * 2.0 - 1.0;
            dir.emplace_back(key, c);
            norm2 += c * c;
        }
        const double norm = std::sqrt(std::max(norm2, 1e-12));
        for (auto& [key, c] : dir) c /= norm;
        const LpOutcome over_outer = maximize_expr_over(outer_relaxed, dir);
        const LpOutcome over_inner = maximize_expr_over(inner_relaxed, dir);
        if (over_outer.status != LpStatus::Optimal || over_inner.status != LpStatus::Optimal)
            throw SolveError("support LP did not solve");
        worst = std::min(worst, over_outer.objective - over_inner.objective);
    }
    return worst;
}

bool walk_family_bound_check(const Instance& inst, const std::vector<Walk>& walks) {
    if (walks.empty()) throw InvalidArgument("walk family is empty");
    for (const Walk& w : walks) {
        w.validate();
        for (const Arc& a : w.arcs)
            if (!inst.has_arc(a.tail, a.head))
                throw InvalidArgument("walk uses an arc missing from the instance");
    }
    const int t = walks.front().end();
    for (std::size_t i = 0; i < walks.size(); ++i)
        if (walks[i].end() != t)
            throw InvalidArgument("walk " + std::to_string(i) + " does not end at the shared node");
    // Pairwise: some node must collect two distinct incoming arcs across the
    // pair of walks.
    const auto incoming = [](const Walk& w) {
        std::map<int, std::set<Arc>> by_node;
        for (const Arc& a : w.arcs) by_node[a.head].insert(a);
        return by_node;
    };
    std::vector<std::map<int, std::set<Arc>>> in_sets;
    in_sets.reserve(walks.size());
    for (const Walk& w : walks) in_sets.push_back(incoming(w));
    for (std::size_t i = 0; i < walks.size(); ++i)
        for (std::size_t j = i + 1; j < walks.size(); ++j) {
            bool ok = false;
            for (const auto& [node, arcs_i] : in_sets[i]) {
                std::set<Arc> merged = arcs_i;
                auto it = in_sets[j].find(node);
                if (it != in_sets[j].end()) merged.insert(it->second.begin(), it->second.end());
                if (merged.size() >= 2) {
                    ok = true;
                    break;
                }
            }
            if (!ok)
                for (const auto& [node, arcs_j] : in_sets[j])
                    if (arcs_j.size() >= 2) ok = true;
            if (!ok)
                throw InvalidArgument("walk pair (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") has no node with two distinct incoming arcs");
        }

    ModelBuilder b;
    for (const Arc& a : inst.arcs()) b.add_variable(VarKey::x(a), 0.0, 1.0, false);
    const auto arcs = inst.arcs();
    for (int v = 1; v <= inst.node_count; ++v) {
        LinearTerms terms;
        for (const Arc& a : arcs)
            if (a.head == v) terms.emplace_back(VarKey::x(a), 1.0);
        if (terms.empty()) continue;
        b.add_constraint(
            Constraint{"F-indeg[v=" + std::to_string(v) + "]", std::move(terms), Sense::Le, 1.0});
    }
    const Model hypothesis = b.build();

    std::map<VarKey, double> coeff;
    long total_length = 0;
    for (const Walk& w : walks) {
        total_length += w.length();
        for (const Arc& a : w.arcs) coeff[VarKey::x(a)] += 1.0;
    }
    LinearTerms expr(coeff.begin(), coeff.end());
    const LpOutcome lp = maximize_expr_over(hypothesis, expr);
    if (lp.status != LpStatus::Optimal) throw SolveError("bound LP did not solve");
    const double bound = static_cast<double>(total_length) - static_cast<double>(walks.size()) + 1.0;
    return lp.objective <= bound + 1e-6;
}

}  // namespace hoptree
