#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "hoptree/errors.hpp"
#include "hoptree/formulations.hpp"
#include "hoptree/polyhedra.hpp"
#include "hoptree/rng.hpp"
#include "hoptree/simplex.hpp"
#include "oracles.hpp"

using namespace hoptree;

namespace {

Instance k3(int hop) {
    Instance inst;
    inst.node_count = 3;
    inst.root = 3;
    inst.hop_limit = hop;
    inst.terminals = {1, 2, 3};
    inst.edges = {Edge{1, 2, 1.0}, Edge{1, 3, 1.0}, Edge{2, 3, 1.0}};
    inst.validate();
    return inst;
}

// Hand-built two-row system over two columns for the textbook elimination.
RationalSystem toy_system() {
    RationalSystem sys;
    sys.directory = {VarKey::x(1, 2), VarKey::x(2, 1)};  // "x", "y"
    RationalRow r0;
    r0.coef = {1, 1};
    r0.rhs = 1;
    r0.provenance = {{0, 1}};
    RationalRow r1;
    r1.coef = {0, -1};
    r1.rhs = 0;
    r1.provenance = {{2, 1}};
    sys.rows = {r0, r1};
    sys.originals = sys.rows;
    return sys;
}

// Builds a float Model whose feasible set is the given x-space system plus
// [0,1] boxes, so the projection can be optimized over directly.
Model model_of_projection(const RationalSystem& sys) {
    ModelBuilder b;
    for (const VarKey& key : sys.directory)
        if (key.family == VarFamily::X) b.add_variable(key, 0.0, 1.0, false);
    int row_id = 0;
    for (const RationalRow& row : sys.rows) {
        LinearTerms terms;
        for (std::size_t c = 0; c < sys.directory.size(); ++c)
            if (row.coef[c] != 0) terms.emplace_back(sys.directory[c], row.coef[c].get_d());
        if (terms.empty()) continue;
        b.add_constraint(Constraint{"proj[" + std::to_string(row_id++) + "]", std::move(terms),
                                    row.sense == RowSense::Eq ? Sense::Eq : Sense::Le,
                                    row.rhs.get_d()});
    }
    b.set_objective(Objective{});
    return b.build();
}

// Exact membership of a rational point in the system.
bool satisfies(const RationalSystem& sys, const std::vector<mpq_class>& point) {
    for (const RationalRow& row : sys.rows) {
        mpq_class lhs = 0;
        for (std::size_t c = 0; c < sys.directory.size(); ++c) lhs += row.coef[c] * point[c];
        if (row.sense == RowSense::Eq ? lhs != row.rhs : lhs > row.rhs) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("rationalize splits senses and adds bound rows") {
    const Instance inst = k3(1);
    const HopTreeModel a = build_aht(inst);
    const RationalSystem sys = rationalize(a.model);
    CHECK(sys.rows.size() ==
          static_cast<std::size_t>(a.model.constraint_count() + 2 * a.model.variable_count()));
    // integers survive exactly
    for (const RationalRow& row : sys.rows)
        for (const mpq_class& c : row.coef) CHECK(c.get_den() == 1);
    for (const RationalRow& row : sys.rows) CHECK(sys.provenance_consistent(row));
}

TEST_CASE("textbook elimination combines the positive and negative rows") {
    const RationalSystem sys = toy_system();
    const RationalSystem out = fme_eliminate(sys, VarKey::x(2, 1));
    REQUIRE(out.rows.size() == 1);
    CHECK(out.rows[0].coef[0] == 1);
    CHECK(out.rows[0].coef[1] == 0);
    CHECK(out.rows[0].rhs == 1);
    // weights: 1 * row0 + 1 * row1
    CHECK(out.rows[0].provenance.at(0) == 1);
    CHECK(out.rows[0].provenance.at(2) == 1);
}

TEST_CASE("eliminating an absent variable changes nothing") {
    const RationalSystem sys = toy_system();
    const RationalSystem out = fme_eliminate(fme_eliminate(sys, VarKey::x(2, 1)), VarKey::x(2, 1));
    CHECK(out.rows.size() == 1);
    CHECK(out.rows[0].coef[0] == 1);
}

TEST_CASE("one-hot projection at H=1 collapses to the known closed form") {
    const Instance inst = k3(1);
    const HopTreeModel a = build_aht(inst);
    const RationalSystem projected = project_x(rationalize(relax(a.model)));
    for (const RationalRow& row : projected.rows) CHECK(projected.provenance_consistent(row));

    // closed form: x into/out of the root bounded by one, both arcs between
    // the non-root pair forced to zero, plus the shared degree rows
    ModelBuilder b;
    for (const Arc& arc : inst.arcs()) b.add_variable(VarKey::x(arc), 0.0, 1.0, false);
    b.add_constraint(Constraint{"zero[1,2]", {{VarKey::x(1, 2), 1.0}}, Sense::Le, 0.0});
    b.add_constraint(Constraint{"zero[2,1]", {{VarKey::x(2, 1), 1.0}}, Sense::Le, 0.0});
    const auto arcs = inst.arcs();
    for (int v = 1; v <= 3; ++v) {
        LinearTerms terms;
        for (const Arc& arc : arcs)
            if (arc.head == v) terms.emplace_back(VarKey::x(arc), 1.0);
        b.add_constraint(Constraint{"indeg[" + std::to_string(v) + "]", std::move(terms),
                                    Sense::Le, 1.0});
    }
    for (const Arc& out_arc : arcs) {
        if (out_arc.tail == inst.root) continue;
        LinearTerms terms{{VarKey::x(out_arc), 1.0}};
        for (const Arc& in_arc : arcs)
            if (in_arc.head == out_arc.tail && in_arc.tail != out_arc.head)
                terms.emplace_back(VarKey::x(in_arc), -1.0);
        b.add_constraint(Constraint{"outdeg[" + std::to_string(out_arc.tail) + "," +
                                        std::to_string(out_arc.head) + "]",
                                    std::move(terms), Sense::Le, 0.0});
    }
    b.set_objective(Objective{});
    const Model closed_form = b.build();

    for (const RationalRow& row : projected.rows) {
        LinearTerms expr;
        for (std::size_t c = 0; c < projected.directory.size(); ++c)
            if (row.coef[c] != 0) expr.emplace_back(projected.directory[c], row.coef[c].get_d());
        const double rhs = row.rhs.get_d();
        if (expr.empty()) {
            CHECK(rhs >= 0);
            continue;
        }
        const LpOutcome lp = maximize_expr_over(closed_form, expr);
        REQUIRE(lp.status == LpStatus::Optimal);
        CHECK(lp.objective <= rhs + 1e-7);
    }
}

TEST_CASE("threshold projection at H=1 pins the non-root arcs to zero") {
    const Instance inst = k3(1);
    const HopTreeModel p = build_pht(inst);
    const RationalSystem projected = project_x(rationalize(relax(p.model)));
    const Model shadow = model_of_projection(projected);
    const LpOutcome over_shadow = maximize_expr_over(shadow, {{VarKey::x(1, 2), 1.0}});
    REQUIRE(over_shadow.status == LpStatus::Optimal);
    CHECK(over_shadow.objective == doctest::Approx(0.0).epsilon(1e-9));
    const LpOutcome over_model = maximize_expr_over(p.model, {{VarKey::x(1, 2), 1.0}});
    CHECK(over_model.objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("projection is already stable on x-space systems") {
    const RationalSystem sys = toy_system();
    const RationalSystem out = project_x(sys);
    CHECK(out.rows.size() == sys.rows.size());
}

TEST_CASE("relaxation optima project into the shadow") {
    const Instance inst = fixtures::k4();
    const HopTreeModel a = build_aht(inst);
    const RationalSystem projected = project_x(rationalize(relax(a.model)));
    SplitMix64 rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        LinearTerms objective;
        for (const Variable& v : a.model.variables())
            if (v.key.family == VarFamily::X)
                objective.emplace_back(v.key, rng.uniform01() * 2.0 - 1.0);
        const LpOutcome lp = maximize_expr_over(a.model, objective);
        REQUIRE(lp.status == LpStatus::Optimal);
        for (const RationalRow& row : projected.rows) {
            double lhs = 0.0;
            for (std::size_t c = 0; c < projected.directory.size(); ++c)
                if (row.coef[c] != 0)
                    lhs += row.coef[c].get_d() * lp.point.at(projected.directory[c]);
            CHECK(lhs <= row.rhs.get_d() + 1e-6);
        }
    }
}

TEST_CASE("grid membership in the projection equals extension feasibility") {
    const Instance inst = k3(1);
    const HopTreeModel a = build_aht(inst);
    const Model relaxed = relax(a.model);
    const RationalSystem projected = project_x(rationalize(relaxed));

    std::vector<VarKey> xs;
    for (const Variable& v : relaxed.variables())
        if (v.key.family == VarFamily::X) xs.push_back(v.key);
    REQUIRE(xs.size() == 6);

    const mpq_class levels[2] = {mpq_class(0), mpq_class(1, 2)};
    std::vector<int> pick(xs.size(), 0);
    int agreements = 0;
    while (true) {
        std::vector<mpq_class> point(projected.directory.size(), 0);
        for (std::size_t i = 0; i < xs.size(); ++i)
            point[projected.column(xs[i])] = levels[pick[i]];
        const bool in_shadow = satisfies(projected, point);

        // extension LP: fix the x coordinates, ask for any feasible y
        ModelBuilder b;
        for (const Variable& v : relaxed.variables()) {
            if (v.key.family == VarFamily::X) {
                const double val = point[projected.column(v.key)].get_d();
                b.add_variable(v.key, val, val, false);
            } else {
                b.add_variable(v.key, v.lo, v.hi, false);
            }
        }
        for (const Constraint& c : relaxed.constraints()) b.add_constraint(c);
        b.set_objective(Objective{});
        const bool extends = solve_lp(b.build()).status == LpStatus::Optimal;

        CHECK(in_shadow == extends);
        agreements += in_shadow == extends;

        std::size_t i = 0;
        while (i < pick.size() && pick[i] == 1) pick[i++] = 0;
        if (i == pick.size()) break;
        pick[i] = 1;
    }
    CHECK(agreements == 64);
}

TEST_CASE("self inclusion certifies with nonnegative slack") {
    const Instance inst = k3(1);
    const HopTreeModel a = build_problem(inst, ModelKind::A, ProblemKind::HSTP);
    const InclusionReport report = certify_inclusion(a, a);
    CHECK(report.verdict == InclusionVerdict::Included);
    CHECK(report.worst_slack >= -1e-7);
    CHECK(report.checked_rows > 0);
}

TEST_CASE("threshold shadow sits inside the one-hot shadow on K3") {
    const Instance inst = k3(1);
    const HopTreeModel a = build_problem(inst, ModelKind::A, ProblemKind::HSTP);
    const HopTreeModel p = build_problem(inst, ModelKind::P, ProblemKind::HSTP);
    CHECK(certify_inclusion(a, p).verdict == InclusionVerdict::Included);
}

TEST_CASE("reversed inclusion is refuted on the worked K4 configuration") {
    const Instance inst = fixtures::k4();
    const HopTreeModel a = build_problem(inst, ModelKind::A, ProblemKind::HSTP);
    const HopTreeModel p = build_problem(inst, ModelKind::P, ProblemKind::HSTP);
    const InclusionReport report = certify_inclusion(p, a);
    CHECK(report.verdict == InclusionVerdict::CounterexampleFound);
    REQUIRE(report.counterexample.has_value());
}

TEST_CASE("tiny row caps give an inconclusive verdict") {
    const Instance inst = fixtures::k4();
    const HopTreeModel a = build_problem(inst, ModelKind::A, ProblemKind::HSTP);
    const HopTreeModel p = build_problem(inst, ModelKind::P, ProblemKind::HSTP);
    const InclusionReport report = certify_inclusion(a, p, 1e-7, 4);
    CHECK(report.verdict == InclusionVerdict::Inconclusive);
}

TEST_CASE("support sampling respects the proven inclusion") {
    Instance inst = generate_random(5, 21, 1, 10);
    inst.hop_limit = 2;
    const HopTreeModel a = build_problem(inst, ModelKind::A, ProblemKind::HMSTP);
    const HopTreeModel p = build_problem(inst, ModelKind::P, ProblemKind::HMSTP);
    CHECK(support_dominance(a, p, 50, 7) >= -1e-6);
    CHECK(std::abs(support_dominance(a, a, 10, 3)) <= 1e-6);
}

TEST_CASE("the walk indicator direction separates the models by at least one third") {
    const Instance inst = fixtures::k4();
    const HopTreeModel a = build_aht(inst);
    const HopTreeModel p = build_pht(inst);
    const LinearTerms walk_dir{{VarKey::x(1, 2), 1.0}, {VarKey::x(2, 3), 1.0}};
    const double margin = maximize_expr_over(a.model, walk_dir).objective -
                          maximize_expr_over(p.model, walk_dir).objective;
    CHECK(margin >= 1.0 / 3.0 - 1e-6);
}

TEST_CASE("single-sink walk families obey the indegree bound") {
    const Instance inst = generate_random(6, 2, 1, 10);

    SUBCASE("a single walk is only bounded by its length") {
        CHECK(walk_family_bound_check(inst, {Walk::from_nodes({1, 2, 3, 4})}));
    }

    SUBCASE("the three-walk family from the worked figure") {
        // a=1, b=2, c=3, e=4, t=5, r=6
        const std::vector<Walk> family{Walk::from_nodes({1, 3, 5}),
                                       Walk::from_nodes({2, 4, 3, 5}),
                                       Walk::from_nodes({6, 5})};
        CHECK(walk_family_bound_check(inst, family));
    }

    SUBCASE("two unit walks into the same node") {
        CHECK(walk_family_bound_check(inst, {Walk::from_nodes({1, 5}), Walk::from_nodes({2, 5})}));
    }

    SUBCASE("precondition violations are reported") {
        CHECK_THROWS_AS(
            walk_family_bound_check(inst, {Walk::from_nodes({1, 5}), Walk::from_nodes({2, 6})}),
            InvalidArgument);
        CHECK_THROWS_AS(
            walk_family_bound_check(inst, {Walk::from_nodes({1, 5}), Walk::from_nodes({1, 5})}),
            InvalidArgument);
        CHECK_THROWS_AS(walk_family_bound_check(inst, {}), InvalidArgument);
    }
}
