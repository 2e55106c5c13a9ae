#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "hoptree/errors.hpp"
#include "hoptree/formulations.hpp"
#include "hoptree/model.hpp"

using namespace hoptree;

TEST_CASE("variable names round trip") {
    for (const VarKey key : {VarKey::x(1, 2), VarKey::l(3, 0), VarKey::g(7, 11), VarKey::y(2, 5)}) {
        const auto parsed = VarKey::parse(key.name());
        REQUIRE(parsed.has_value());
        CHECK(*parsed == key);
    }
    CHECK(!VarKey::parse("z[1,2]").has_value());
    CHECK(!VarKey::parse("x[1]").has_value());
    CHECK(!VarKey::parse("x[1,2").has_value());
}

TEST_CASE("builder rejects malformed models") {
    ModelBuilder b;
    b.add_variable(VarKey::x(1, 2), 0, 1, true);
    CHECK_THROWS_AS(b.add_variable(VarKey::x(1, 2), 0, 1, true), InvalidArgument);
    CHECK_THROWS_AS(b.add_variable(VarKey::x(2, 1), 1, 0, true), InvalidArgument);
    CHECK_THROWS_AS(
        b.add_constraint(Constraint{"c", {{VarKey::x(9, 9), 1.0}}, Sense::Le, 1.0}),
        InvalidArgument);
    CHECK_THROWS_AS(b.add_constraint(Constraint{"c", {{VarKey::x(1, 2), 0.0}}, Sense::Le, 1.0}),
                    InvalidArgument);
    b.add_constraint(Constraint{"c", {{VarKey::x(1, 2), 1.0}}, Sense::Le, 1.0});
    CHECK_THROWS_AS(b.add_constraint(Constraint{
                        "dup", {{VarKey::x(1, 2), 1.0}, {VarKey::x(1, 2), 2.0}}, Sense::Le, 1.0}),
                    InvalidArgument);
}

TEST_CASE("objective evaluation") {
    ModelBuilder b;
    b.add_variable(VarKey::x(1, 2), 0, 1, false);
    b.set_objective(Objective{});
    const Model empty_obj = b.build();
    Point p;
    p.set(VarKey::x(1, 2), 0.7);
    CHECK(evaluate_objective(empty_obj, p) == 0.0);

    // STPRBH-style: the root revenue is a constant term, so the empty tree
    // scores exactly that constant.
    ModelBuilder b2;
    b2.add_variable(VarKey::x(1, 2), 0, 1, false);
    b2.set_objective(Objective{ObjSense::Max, {{VarKey::x(1, 2), 5.0}}, 9.0});
    const Model m2 = b2.build();
    Point zero;
    zero.set(VarKey::x(1, 2), 0.0);
    CHECK(evaluate_objective(m2, zero) == 9.0);

    Point missing;
    CHECK_THROWS_WITH_AS(evaluate_objective(m2, missing),
                         "point has no value for x[1,2]", InvalidArgument);
}

TEST_CASE("worked fractional point scores 3 under unit costs") {
    const Instance inst = fixtures::k4();
    const HopTreeModel a = apply_hstp(build_aht(inst), inst);
    const double value = evaluate_objective(a.model, fixtures::example2_point());
    CHECK(value == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("violated constraints on the all-zero point") {
    const Instance inst = fixtures::k4();
    const HopTreeModel p = build_pht(inst);
    Point zero;
    for (const Variable& v : p.model.variables()) zero.set(v.key, 0.0);
    const auto violations = violated_constraints(p.model, zero, 1e-9);
    CHECK(!violations.empty());
    for (const Violation& v : violations) {
        CHECK(v.constraint_id.substr(0, 6) == "F-excl");
        CHECK(v.amount == doctest::Approx(1.0));
    }
    CHECK(violations.size() == 4 * 2);  // n*H exclusivity rows
}

TEST_CASE("violated constraints include bound breaches") {
    ModelBuilder b;
    b.add_variable(VarKey::x(1, 2), 0, 1, false);
    b.set_objective(Objective{});
    const Model m = b.build();
    Point p;
    p.set(VarKey::x(1, 2), 1.5);
    const auto violations = violated_constraints(m, p, 1e-9);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint_id == "B-up[x[1,2]]");
    CHECK(violations[0].amount == doctest::Approx(0.5));
}

TEST_CASE("zero tolerance means exact satisfaction") {
    ModelBuilder b;
    b.add_variable(VarKey::x(1, 2), 0, 1, false);
    b.add_constraint(Constraint{"c", {{VarKey::x(1, 2), 1.0}}, Sense::Le, 0.5});
    b.set_objective(Objective{});
    const Model m = b.build();
    Point p;
    p.set(VarKey::x(1, 2), 0.5);
    CHECK(violated_constraints(m, p, 0.0).empty());
    p.set(VarKey::x(1, 2), 0.5 + 1e-12);
    CHECK(violated_constraints(m, p, 0.0).size() == 1);
}

TEST_CASE("constraint ids are unique in built models") {
    const Instance inst = fixtures::k4();
    for (const HopTreeModel& m : {build_pht(inst), build_aht(inst)}) {
        std::set<std::string> ids;
        for (const Constraint& c : m.model.constraints()) ids.insert(c.id);
        CHECK(ids.size() == static_cast<std::size_t>(m.model.constraint_count()));
    }
}

TEST_CASE("relaxation clears integrality and is idempotent") {
    const Instance inst = fixtures::k4();
    const HopTreeModel a = build_aht(inst);
    const Model relaxed = relax(a.model);
    CHECK(relaxed.constraint_count() == a.model.constraint_count());
    CHECK(relaxed.variable_count() == a.model.variable_count());
    int integral = 0;
    for (const Variable& v : relaxed.variables()) integral += v.integral;
    CHECK(integral == 0);
    const Model twice = relax(relaxed);
    CHECK(twice.variable_count() == relaxed.variable_count());
    for (int j = 0; j < twice.variable_count(); ++j)
        CHECK(twice.variables()[j].integral == relaxed.variables()[j].integral);
}

TEST_CASE("objective evaluation is affine") {
    const Instance inst = fixtures::k4(3.0, 1.0);
    const HopTreeModel a = apply_hstp(build_aht(inst), inst);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Point p, q;
    for (const Variable& v : a.model.variables()) {
        p.set(v.key, unif(rng));
        q.set(v.key, unif(rng));
    }
    for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
        Point mix;
        for (const Variable& v : a.model.variables())
            mix.set(v.key, alpha * p.at(v.key) + (1 - alpha) * q.at(v.key));
        const double expect =
            alpha * evaluate_objective(a.model, p) + (1 - alpha) * evaluate_objective(a.model, q);
        CHECK(evaluate_objective(a.model, mix) == doctest::Approx(expect).epsilon(1e-12));
    }
}
