#include "hoptree/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hoptree/errors.hpp"

namespace hoptree {

namespace detail {

PreparedLp prepare(const Model& m) {
    PreparedLp prep;
    prep.n_struct = m.variable_count();
    prep.rows = m.constraint_count();
    prep.maximize = m.objective().sense == ObjSense::Max;
    prep.obj_constant = m.objective().constant;
    prep.cost.assign(prep.n_struct, 0.0);
    for (const auto& [key, coeff] : m.objective().terms)
        prep.cost[m.column(key)] += prep.maximize ? -coeff : coeff;
    prep.cols.resize(prep.n_struct);
    prep.rhs.reserve(prep.rows);
    prep.senses.reserve(prep.rows);
    for (int r = 0; r < prep.rows; ++r) {
        const Constraint& c = m.constraints()[r];
        prep.rhs.push_back(c.rhs);
        prep.senses.push_back(c.sense);
        for (const auto& [key, coeff] : c.terms) prep.cols[m.column(key)].emplace_back(r, coeff);
    }
    prep.keys.reserve(prep.n_struct);
    for (const Variable& v : m.variables()) {
        if (!std::isfinite(v.lo) || !std::isfinite(v.hi))
            throw InvalidArgument("solver requires finite bounds; " + v.key.name() +
                                  " is unbounded");
        prep.keys.push_back(v.key);
        prep.lo.push_back(v.lo);
        prep.hi.push_back(v.hi);
        prep.integral.push_back(v.integral ? 1 : 0);
    }
    return prep;
}

}  // namespace detail

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ColState : std::uint8_t { AtLo, AtUp, Basic };

// Bounded-variable primal simplex over the equality form A x + s = b with
// one slack column per row. Feasibility is reached with artificial columns
// minimized in a first phase; the second phase optimizes the real costs.
//
// The basis inverse is kept explicitly and refactorized every
// `refactor_every` pivots; between refactorizations the pivots live in a
// product-form eta list and the reduced costs are updated incrementally
// from the pivot row. Refactorization exploits the unit columns of slacks
// and artificials: only the k structural basic columns need a dense k x k
// inverse, so it costs O(k^3 + k^2 m) rather than O(m^3). Before declaring
// optimality the solver refactorizes and re-prices once, so drift in the
// incremental updates cannot produce a false optimum.
class Simplex {
public:
    Simplex(const detail::PreparedLp& prep, const std::vector<double>& lo,
            const std::vector<double>& hi, const SolveOptions& opts)
        : prep_(prep), opts_(opts), m_(prep.rows) {
        const int n = prep.n_struct;
        cols_.reserve(n + 2 * m_);
        lo_.reserve(n + 2 * m_);
        hi_.reserve(n + 2 * m_);
        for (int j = 0; j < n; ++j) {
            cols_.push_back(prep.cols[j]);
            lo_.push_back(lo[j]);
            hi_.push_back(hi[j]);
        }
        for (int r = 0; r < m_; ++r) {
            cols_.push_back({{r, 1.0}});
            switch (prep.senses[r]) {
                case Sense::Le: lo_.push_back(0.0); hi_.push_back(kInf); break;
                case Sense::Eq: lo_.push_back(0.0); hi_.push_back(0.0); break;
                case Sense::Ge: lo_.push_back(-kInf); hi_.push_back(0.0); break;
            }
        }
        ncols_ = static_cast<int>(cols_.size());
    }

    LpStatus run(int& iterations) {
        setup_initial_basis();
        iterations = 0;
        if (!artificials_.empty()) {
            cost_.assign(ncols_, 0.0);
            for (int j : artificials_) cost_[j] = xval_[j] >= 0.0 ? 1.0 : -1.0;
            reprice();
            const LpStatus s = optimize(iterations);
            if (s != LpStatus::Optimal) return s;
            double infeas = 0.0;
            for (int j : artificials_) infeas += std::abs(xval_[j]);
            double scale = 1.0;
            for (double b : prep_.rhs) scale = std::max(scale, std::abs(b));
            if (infeas > 10.0 * opts_.feas_tol * scale) return LpStatus::Infeasible;
            for (int j : artificials_) {
                lo_[j] = 0.0;
                hi_[j] = 0.0;
                if (state_[j] != ColState::Basic) xval_[j] = 0.0;
            }
        }
        cost_.assign(ncols_, 0.0);
        for (int j = 0; j < prep_.n_struct; ++j) cost_[j] = prep_.cost[j];
        reprice();
        int phase2 = 0;
        const LpStatus s = optimize(phase2);
        iterations += phase2;
        return s;
    }

    double objective_value() const {
        double v = 0.0;
        for (int j = 0; j < prep_.n_struct; ++j)
            if (prep_.cost[j] != 0.0) v += prep_.cost[j] * xval_[j];
        return v;
    }

    double structural_value(int j) const { return xval_[j]; }

    // Exact duals for the current basis; called after run(). The optimality
    // path always ends on a refactorization, so the eta list is normally
    // empty already.
    std::vector<double> row_duals() {
        if (!etas_.empty()) refactor();
        return dual_vector();
    }

private:
    struct Eta {
        int rpos;
        double pivot;
        std::vector<double> w;  // FTRAN of the entering column at pivot time
    };

    const detail::PreparedLp& prep_;
    SolveOptions opts_;
    int m_ = 0;
    int ncols_ = 0;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> lo_, hi_, cost_, xval_, d_;
    std::vector<ColState> state_;
    std::vector<int> basis_;      // row position -> column
    std::vector<int> basic_pos_;  // column -> row position or -1
    std::vector<double> binv_;    // explicit inverse at the last refactorization
    std::vector<Eta> etas_;      // pivots applied since then
    std::vector<int> artificials_;

    void setup_initial_basis() {
        xval_.assign(ncols_, 0.0);
        state_.assign(ncols_, ColState::AtLo);
        for (int j = 0; j < prep_.n_struct; ++j) xval_[j] = lo_[j];
        for (int r = 0; r < m_; ++r) {
            const int sj = prep_.n_struct + r;
            if (std::isfinite(lo_[sj])) {
                xval_[sj] = lo_[sj];
                state_[sj] = ColState::AtLo;
            } else {
                xval_[sj] = hi_[sj];
                state_[sj] = ColState::AtUp;
            }
        }
        std::vector<double> residual = prep_.rhs;
        for (int j = 0; j < prep_.n_struct; ++j)
            if (xval_[j] != 0.0)
                for (const auto& [r, v] : cols_[j]) residual[r] -= v * xval_[j];

        basis_.assign(m_, -1);
        artificials_.clear();
        for (int r = 0; r < m_; ++r) {
            const int sj = prep_.n_struct + r;
            if (residual[r] >= lo_[sj] - 1e-12 && residual[r] <= hi_[sj] + 1e-12) {
                basis_[r] = sj;
                state_[sj] = ColState::Basic;
                xval_[sj] = residual[r];
            } else {
                const double clamped = std::clamp(residual[r], lo_[sj], hi_[sj]);
                xval_[sj] = clamped;
                state_[sj] = clamped == lo_[sj] ? ColState::AtLo : ColState::AtUp;
                const double deficit = residual[r] - clamped;
                const int aj = static_cast<int>(cols_.size());
                cols_.push_back({{r, 1.0}});
                lo_.push_back(deficit > 0 ? 0.0 : -kInf);
                hi_.push_back(deficit > 0 ? kInf : 0.0);
                xval_.push_back(deficit);
                state_.push_back(ColState::Basic);
                basis_[r] = aj;
                artificials_.push_back(aj);
            }
        }
        ncols_ = static_cast<int>(cols_.size());
        basic_pos_.assign(ncols_, -1);
        for (int r = 0; r < m_; ++r) basic_pos_[basis_[r]] = r;
        refactor();
    }

    // Explicit inverse by block elimination: unit basis columns (slacks,
    // artificials) pin their rows directly; only the k structural basic
    // columns need a dense k x k inverse.
    void refactor() {
        etas_.clear();
        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        std::vector<int> pos_of_row(m_, -1);  // row pinned by a unit basis column
        std::vector<int> dense_pos;
        for (int i = 0; i < m_; ++i) {
            const auto& col = cols_[basis_[i]];
            if (col.size() == 1 && col[0].second == 1.0)
                pos_of_row[col[0].first] = i;
            else
                dense_pos.push_back(i);
        }
        std::vector<int> free_rows;
        for (int r = 0; r < m_; ++r)
            if (pos_of_row[r] == -1) free_rows.push_back(r);
        const int k = static_cast<int>(dense_pos.size());
        if (static_cast<int>(free_rows.size()) != k)
            throw SolveError("invalid basis structure during refactorization");
        std::vector<int> free_index(m_, -1);
        for (int a = 0; a < k; ++a) free_index[free_rows[a]] = a;

        std::vector<double> kinv(static_cast<std::size_t>(k) * k, 0.0);
        if (k > 0) {
            std::vector<double> work(static_cast<std::size_t>(k) * k, 0.0);
            for (int b = 0; b < k; ++b)
                for (const auto& [r, v] : cols_[basis_[dense_pos[b]]])
                    if (free_index[r] >= 0)
                        work[static_cast<std::size_t>(free_index[r]) * k + b] = v;
            for (int a = 0; a < k; ++a) kinv[static_cast<std::size_t>(a) * k + a] = 1.0;
            for (int c = 0; c < k; ++c) {
                int piv = -1;
                double best = 0.0;
                for (int r = c; r < k; ++r) {
                    const double v = std::abs(work[static_cast<std::size_t>(r) * k + c]);
                    if (v > best) {
                        best = v;
                        piv = r;
                    }
                }
                if (piv < 0 || best < 1e-11) throw SolveError("singular basis");
                if (piv != c)
                    for (int q = 0; q < k; ++q) {
                        std::swap(work[static_cast<std::size_t>(piv) * k + q],
                                  work[static_cast<std::size_t>(c) * k + q]);
                        std::swap(kinv[static_cast<std::size_t>(piv) * k + q],
                                  kinv[static_cast<std::size_t>(c) * k + q]);
                    }
                const double dpiv = work[static_cast<std::size_t>(c) * k + c];
                for (int q = 0; q < k; ++q) {
                    work[static_cast<std::size_t>(c) * k + q] /= dpiv;
                    kinv[static_cast<std::size_t>(c) * k + q] /= dpiv;
                }
                for (int r = 0; r < k; ++r) {
                    if (r == c) continue;
                    const double f = work[static_cast<std::size_t>(r) * k + c];
                    if (f == 0.0) continue;
                    for (int q = 0; q < k; ++q) {
                        work[static_cast<std::size_t>(r) * k + q] -=
                            f * work[static_cast<std::size_t>(c) * k + q];
                        kinv[static_cast<std::size_t>(r) * k + q] -=
                            f * kinv[static_cast<std::size_t>(c) * k + q];
                    }
                }
            }
        }

        for (int r = 0; r < m_; ++r)
            if (pos_of_row[r] >= 0)
                binv_[static_cast<std::size_t>(pos_of_row[r]) * m_ + r] = 1.0;
        for (int b = 0; b < k; ++b) {
            const int pos = dense_pos[b];
            for (int a = 0; a < k; ++a)
                binv_[static_cast<std::size_t>(pos) * m_ + free_rows[a]] =
                    kinv[static_cast<std::size_t>(b) * k + a];
        }
        for (int b = 0; b < k; ++b)
            for (const auto& [r, v] : cols_[basis_[dense_pos[b]]]) {
                const int u = pos_of_row[r];
                if (u < 0) continue;
                double* urow = &binv_[static_cast<std::size_t>(u) * m_];
                const double* krow = &kinv[static_cast<std::size_t>(b) * k];
                for (int a = 0; a < k; ++a) urow[free_rows[a]] -= v * krow[a];
            }

        recompute_basics();
        if (!cost_.empty()) reprice();
    }

    void recompute_basics() {
        std::vector<double> rhs = prep_.rhs;
        for (int j = 0; j < ncols_; ++j) {
            if (state_[j] == ColState::Basic || xval_[j] == 0.0) continue;
            for (const auto& [r, v] : cols_[j]) rhs[r] -= v * xval_[j];
        }
        for (int i = 0; i < m_; ++i) {
            const double* row = &binv_[static_cast<std::size_t>(i) * m_];
            double v = 0.0;
            for (int r = 0; r < m_; ++r) v += row[r] * rhs[r];
            xval_[basis_[i]] = v;
        }
    }

    std::vector<double> dual_vector() const {
        std::vector<double> y(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = &binv_[static_cast<std::size_t>(i) * m_];
            for (int k = 0; k < m_; ++k) y[k] += cb * row[k];
        }
        return y;
    }

    // Fresh reduced costs from the explicit inverse (eta list must be empty).
    void reprice() {
        const std::vector<double> y = dual_vector();
        d_.assign(ncols_, 0.0);
        for (int j = 0; j < ncols_; ++j) {
            if (state_[j] == ColState::Basic) continue;
            double dj = cost_[j];
            for (const auto& [r, v] : cols_[j]) dj -= y[r] * v;
            d_[j] = dj;
        }
    }

    std::vector<double> ftran(int q) const {
        std::vector<double> w(m_, 0.0);
        for (const auto& [r, v] : cols_[q])
            for (int i = 0; i < m_; ++i)
                w[i] += binv_[static_cast<std::size_t>(i) * m_ + r] * v;
        for (const Eta& e : etas_) {
            const double t = w[e.rpos] / e.pivot;
            if (t == 0.0) {
                continue;
            }
            for (int i = 0; i < m_; ++i) w[i] -= e.w[i] * t;
            w[e.rpos] = t;
        }
        return w;
    }

    // Row `rpos` of the current basis inverse, including the eta just
    // appended for the pivot being processed.
    std::vector<double> inverse_row(int rpos) const {
        // z^T = e_rpos^T E_k ... E_1, sparse throughout (one fill per eta).
        std::vector<double> z(m_, 0.0);
        std::vector<int> touched;
        z[rpos] = 1.0;
        touched.push_back(rpos);
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = 0.0;
            for (int idx : touched) s += z[idx] * it->w[idx];
            const double zr = z[it->rpos];
            const double updated = zr - (s - zr) / it->pivot;
            if (z[it->rpos] == 0.0 && updated != 0.0) touched.push_back(it->rpos);
            z[it->rpos] = updated;
        }
        std::vector<double> rho(m_, 0.0);
        for (int idx : touched) {
            const double zi = z[idx];
            if (zi == 0.0) continue;
            const double* row = &binv_[static_cast<std::size_t>(idx) * m_];
            for (int r = 0; r < m_; ++r) rho[r] += zi * row[r];
        }
        return rho;
    }

    int pick_entering(bool bland, const std::vector<char>& banned) const {
        int entering = -1;
        double best = opts_.dual_tol;
        for (int j = 0; j < ncols_; ++j) {
            if (state_[j] == ColState::Basic || lo_[j] == hi_[j] || banned[j]) continue;
            const double violation = state_[j] == ColState::AtLo ? -d_[j] : d_[j];
            if (violation > best) {
                if (bland) return j;
                entering = j;
                best = violation;
            }
        }
        return entering;
    }

    LpStatus optimize(int& iterations) {
        long limit = opts_.iteration_limit;
        if (limit <= 0) limit = 50000 + 200L * (m_ + ncols_);
        bool bland = false;
        int stalled = 0;
        bool verified = false;
        std::vector<char> banned(ncols_, 0);
        bool any_banned = false;
        while (true) {
            if (iterations >= limit) return LpStatus::IterationLimit;
            const int entering = pick_entering(bland, banned);
            if (entering < 0) {
                // Guard against drift: refactorize (which re-prices) and
                // re-scan before declaring optimality.
                if (!verified && !etas_.empty()) {
                    refactor();
                    verified = true;
                    continue;
                }
                if (!verified) {
                    reprice();
                    verified = true;
                    continue;
                }
                return LpStatus::Optimal;
            }
            verified = false;

            const double d_entering = d_[entering];
            const int dir = state_[entering] == ColState::AtLo ? 1 : -1;
            const std::vector<double> w = ftran(entering);

            const double range = hi_[entering] - lo_[entering];
            double theta = std::isfinite(range) ? range : kInf;
            int leaving_pos = -1;  // -1 means the entering variable flips bound
            double leaving_w = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double delta = dir * w[i];
                if (std::abs(delta) <= opts_.pivot_tol) continue;
                const int k = basis_[i];
                double t;
                if (delta > 0) {
                    if (!std::isfinite(lo_[k])) continue;
                    t = (xval_[k] - lo_[k]) / delta;
                } else {
                    if (!std::isfinite(hi_[k])) continue;
                    t = (hi_[k] - xval_[k]) / (-delta);
                }
                if (t < 0) t = 0;
                if (t < theta - 1e-9) {
                    theta = t;
                    leaving_pos = i;
                    leaving_w = w[i];
                } else if (t <= theta + 1e-9 && leaving_pos >= 0) {
                    const double wi = std::abs(w[i]);
                    const double wl = std::abs(leaving_w);
                    if (wi > wl + 1e-12 ||
                        (std::abs(wi - wl) <= 1e-12 && k < basis_[leaving_pos])) {
                        leaving_pos = i;
                        leaving_w = w[i];
                    }
                }
            }
            if (!std::isfinite(theta)) {
                // Every structural column is boxed, so an infinite step can
                // only move slacks and the true objective rate along it is
                // zero: the violating reduced cost is numerical noise. Look
                // again from a fresh factorization; if it persists, the
                // column is numerically dependent and gets skipped.
                ++iterations;
                if (!etas_.empty()) {
                    refactor();
                    continue;
                }
                banned[entering] = 1;
                any_banned = true;
                continue;
            }

            ++iterations;
            if (theta < 1e-10) {
                if (++stalled >= opts_.stall_threshold) bland = true;
            } else {
                stalled = 0;
                bland = false;
            }
            if (any_banned) {
                banned.assign(ncols_, 0);
                any_banned = false;
            }

            for (int i = 0; i < m_; ++i)
                if (w[i] != 0.0) xval_[basis_[i]] -= theta * dir * w[i];

            if (leaving_pos < 0) {
                // Bound flip: basis and reduced costs are unchanged.
                xval_[entering] = dir > 0 ? hi_[entering] : lo_[entering];
                state_[entering] = dir > 0 ? ColState::AtUp : ColState::AtLo;
                continue;
            }

            const int leaving = basis_[leaving_pos];
            xval_[entering] =
                (state_[entering] == ColState::AtLo ? lo_[entering] : hi_[entering]) + dir * theta;
            if (dir * leaving_w > 0) {
                xval_[leaving] = lo_[leaving];
                state_[leaving] = ColState::AtLo;
            } else {
                xval_[leaving] = hi_[leaving];
                state_[leaving] = ColState::AtUp;
            }
            basic_pos_[leaving] = -1;
            basis_[leaving_pos] = entering;
            basic_pos_[entering] = leaving_pos;
            state_[entering] = ColState::Basic;
            etas_.push_back(Eta{leaving_pos, leaving_w, w});

            // Incremental reduced costs from the new pivot row:
            // d_j <- d_j - d_entering * (row_rpos of Bnew^-1) . a_j.
            const std::vector<double> rho = inverse_row(leaving_pos);
            for (int j = 0; j < ncols_; ++j) {
                if (state_[j] == ColState::Basic) {
                    d_[j] = 0.0;
                    continue;
                }
                double alpha = 0.0;
                for (const auto& [r, v] : cols_[j]) alpha += rho[r] * v;
                if (alpha != 0.0) d_[j] -= d_entering * alpha;
            }

            if (static_cast<int>(etas_.size()) >= opts_.refactor_every) refactor();
        }
    }
};

// Singleton-equality presolve: rows with a single term fix their variable.
// The reduced model keeps every column (with tightened bounds) so points and
// column indices are unchanged; dropped rows report dual 0, which keeps the
// weak-duality identity intact.
struct FixedSubstitution {
    Model reduced;
    std::vector<int> kept_rows;
    bool infeasible = false;
};

FixedSubstitution substitute_fixed(const Model& m, double feas_tol) {
    FixedSubstitution out;
    std::vector<double> lo(m.variable_count()), hi(m.variable_count());
    for (int j = 0; j < m.variable_count(); ++j) {
        lo[j] = m.variables()[j].lo;
        hi[j] = m.variables()[j].hi;
    }
    std::vector<char> dropped(m.constraint_count(), 0);
    for (int r = 0; r < m.constraint_count(); ++r) {
        const Constraint& c = m.constraints()[r];
        if (c.sense != Sense::Eq || c.terms.size() != 1) continue;
        const int j = m.column(c.terms[0].first);
        const double v = c.rhs / c.terms[0].second;
        if (v < lo[j] - feas_tol || v > hi[j] + feas_tol) {
            out.infeasible = true;
            return out;
        }
        lo[j] = hi[j] = v;
        dropped[r] = 1;
    }
    ModelBuilder b;
    for (int j = 0; j < m.variable_count(); ++j) {
        const Variable& v = m.variables()[j];
        b.add_variable(v.key, lo[j], hi[j], v.integral);
    }
    for (int r = 0; r < m.constraint_count(); ++r)
        if (!dropped[r]) {
            b.add_constraint(m.constraints()[r]);
            out.kept_rows.push_back(r);
        }
    b.set_objective(m.objective());
    out.reduced = b.build();
    return out;
}

}  // namespace

namespace detail {

LpOutcome solve_prepared(const PreparedLp& prep, const std::vector<double>& lo,
                         const std::vector<double>& hi, const SolveOptions& opts) {
    LpOutcome out;
    Simplex simplex(prep, lo, hi, opts);
    const LpStatus status = simplex.run(out.iterations);
    out.status = status;
    if (status != LpStatus::Optimal) return out;
    const double internal = simplex.objective_value();
    out.objective = (prep.maximize ? -internal : internal) + prep.obj_constant;
    for (int j = 0; j < prep.n_struct; ++j)
        out.point.set(prep.keys[j], simplex.structural_value(j));
    out.row_duals = simplex.row_duals();
    if (prep.maximize)
        for (double& d : out.row_duals) d = -d;
    return out;
}

}  // namespace detail

LpOutcome solve_lp(const Model& m, const SolveOptions& opts) {
    if (opts.substitute_fixed) {
        FixedSubstitution sub = substitute_fixed(m, opts.feas_tol);
        if (sub.infeasible) {
            LpOutcome out;
            out.status = LpStatus::Infeasible;
            return out;
        }
        SolveOptions inner = opts;
        inner.substitute_fixed = false;
        LpOutcome out = solve_lp(sub.reduced, inner);
        if (out.status == LpStatus::Optimal) {
            std::vector<double> duals(m.constraint_count(), 0.0);
            for (std::size_t i = 0; i < sub.kept_rows.size(); ++i)
                duals[sub.kept_rows[i]] = out.row_duals[i];
            out.row_duals = std::move(duals);
        }
        return out;
    }
    const detail::PreparedLp prep = detail::prepare(m);
    return detail::solve_prepared(prep, prep.lo, prep.hi, opts);
}

LpOutcome maximize_expr_over(const Model& m, const LinearTerms& expr, const SolveOptions& opts) {
    ModelBuilder b;
    for (const Variable& v : m.variables()) b.add_variable(v.key, v.lo, v.hi, false);
    for (const Constraint& c : m.constraints()) b.add_constraint(c);
    Objective obj;
    obj.sense = ObjSense::Max;
    obj.terms = expr;
    b.set_objective(std::move(obj));
    return solve_lp(b.build(), opts);
}

}  // namespace hoptree
