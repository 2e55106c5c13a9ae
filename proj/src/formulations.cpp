#include "hoptree/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "hoptree/errors.hpp"
#include "hoptree/simplex.hpp"

namespace hoptree {

namespace {

std::string idx(int v) { return std::to_string(v); }

// Arc variables plus the shared degree rows used by both formulations.
void add_arc_variables(ModelBuilder& b, const Instance& inst) {
    for (const Arc& a : inst.arcs()) b.add_variable(VarKey::x(a), 0.0, 1.0, true);
}

void add_degree_rows(ModelBuilder& b, const Instance& inst) {
    const auto arcs = inst.arcs();
    // F-indeg: at most one incoming arc per node.
    for (int v = 1; v <= inst.node_count; ++v) {
        LinearTerms terms;
        for (const Arc& a : arcs)
            if (a.head == v) terms.emplace_back(VarKey::x(a), 1.0);
        if (terms.empty()) continue;
        b.add_constraint(Constraint{"F-indeg[v=" + idx(v) + "]", std::move(terms), Sense::Le, 1.0});
    }
    // F-outdeg: a non-root node with an outgoing arc needs an incoming one,
    // stated per outgoing arc (v,w) with the incoming sum excluding w.
    for (const Arc& out : arcs) {
        const int v = out.tail;
        const int w = out.head;
        if (v == inst.root) continue;
        LinearTerms terms;
        terms.emplace_back(VarKey::x(out), 1.0);
        for (const Arc& in : arcs)
            if (in.head == v && in.tail != w) terms.emplace_back(VarKey::x(in), -1.0);
        b.add_constraint(Constraint{"F-outdeg[v=" + idx(v) + ",w=" + idx(w) + "]",
                                    std::move(terms), Sense::Le, 0.0});
    }
}

}  // namespace

HopTreeModel build_pht(const Instance& inst) {
    inst.validate();
    const int H = inst.hop_limit;
    const int r = inst.root;
    ModelBuilder b;
    add_arc_variables(b, inst);
    for (int v = 1; v <= inst.node_count; ++v)
        for (int i = 0; i <= H; ++i) b.add_variable(VarKey::l(v, i), 0.0, 1.0, true);
    for (int v = 1; v <= inst.node_count; ++v)
        for (int i = 0; i <= H; ++i) b.add_variable(VarKey::g(v, i), 0.0, 1.0, true);

    // F-root: the root sits at level 0.
    b.add_constraint(Constraint{"F-root[l]", {{VarKey::l(r, 0), 1.0}}, Sense::Eq, 0.0});
    b.add_constraint(Constraint{"F-root[g]", {{VarKey::g(r, 0), 1.0}}, Sense::Eq, 0.0});
    // F-interval: every other node sits in 1..H.
    for (int v = 1; v <= inst.node_count; ++v) {
        if (v == r) continue;
        if (H >= 1)
            b.add_constraint(
                Constraint{"F-interval[l,v=" + idx(v) + "]", {{VarKey::l(v, 1), 1.0}}, Sense::Eq, 0.0});
        b.add_constraint(
            Constraint{"F-interval[g,v=" + idx(v) + "]", {{VarKey::g(v, H), 1.0}}, Sense::Eq, 0.0});
    }
    // F-mono: l thresholds are monotone in the level.
    for (int v = 1; v <= inst.node_count; ++v)
        for (int i = 0; i < H; ++i)
            b.add_constraint(Constraint{"F-mono[v=" + idx(v) + ",i=" + idx(i) + "]",
                                        {{VarKey::l(v, i), 1.0}, {VarKey::l(v, i + 1), -1.0}},
                                        Sense::Le, 0.0});
    // F-excl: each node is either above level i or below level i+1, never both.
    for (int v = 1; v <= inst.node_count; ++v)
        for (int i = 0; i < H; ++i)
            b.add_constraint(Constraint{"F-excl[v=" + idx(v) + ",i=" + idx(i) + "]",
                                        {{VarKey::g(v, i), 1.0}, {VarKey::l(v, i + 1), 1.0}},
                                        Sense::Eq, 1.0});
    // F-arc: a selected arc (u,v) forces level(u) < level(v).
    for (const Arc& a : inst.arcs())
        for (int i = 0; i <= H; ++i)
            b.add_constraint(Constraint{
                "F-arc[u=" + idx(a.tail) + ",v=" + idx(a.head) + ",i=" + idx(i) + "]",
                {{VarKey::x(a), 1.0}, {VarKey::l(a.tail, i), -1.0}, {VarKey::g(a.head, i), -1.0}},
                Sense::Le, 0.0});
    add_degree_rows(b, inst);
    return HopTreeModel{ModelKind::P, inst, b.build()};
}

HopTreeModel build_aht(const Instance& inst) {
    inst.validate();
    const int H = inst.hop_limit;
    const int r = inst.root;
    if (H == 0 && inst.node_count > 1)
        throw InvalidArgument("assignment model needs hop limit >= 1 when non-root nodes exist");
    ModelBuilder b;
    add_arc_variables(b, inst);
    for (int v = 1; v <= inst.node_count; ++v)
        for (int i = 0; i <= H; ++i) b.add_variable(VarKey::y(v, i), 0.0, 1.0, true);

    b.add_constraint(Constraint{"F-rootY", {{VarKey::y(r, 0), 1.0}}, Sense::Eq, 1.0});
    for (int i = 1; i <= H; ++i)
        b.add_constraint(
            Constraint{"F-rootYi[i=" + idx(i) + "]", {{VarKey::y(r, i), 1.0}}, Sense::Eq, 0.0});
    for (int v = 1; v <= inst.node_count; ++v) {
        if (v == r) continue;
        b.add_constraint(
            Constraint{"F-zeroY0[v=" + idx(v) + "]", {{VarKey::y(v, 0), 1.0}}, Sense::Eq, 0.0});
        LinearTerms assign;
        for (int i = 1; i <= H; ++i) assign.emplace_back(VarKey::y(v, i), 1.0);
        b.add_constraint(
            Constraint{"F-assign[v=" + idx(v) + "]", std::move(assign), Sense::Eq, 1.0});
    }
    // F-arcdir: a selected arc (u,v) with level(u)=i puts v at level i+1.
    for (const Arc& a : inst.arcs())
        for (int i = 0; i < H; ++i)
            b.add_constraint(Constraint{
                "F-arcdir[u=" + idx(a.tail) + ",v=" + idx(a.head) + ",i=" + idx(i) + "]",
                {{VarKey::y(a.tail, i), 1.0}, {VarKey::y(a.head, i + 1), -1.0}, {VarKey::x(a), 1.0}},
                Sense::Le, 1.0});
    // F-arcdirH: a node at the last level has no outgoing arc.
    for (const Arc& a : inst.arcs())
        b.add_constraint(Constraint{"F-arcdirH[u=" + idx(a.tail) + ",v=" + idx(a.head) + "]",
                                    {{VarKey::y(a.tail, H), 1.0}, {VarKey::x(a), 1.0}},
                                    Sense::Le, 1.0});
    add_degree_rows(b, inst);
    return HopTreeModel{ModelKind::A, inst, b.build()};
}

HopTreeModel apply_hstp(const HopTreeModel& m, const Instance& inst) {
    std::vector<Constraint> extra;
    const auto arcs = inst.arcs();
    for (int v : inst.terminals) {
        if (v == inst.root) continue;
        LinearTerms terms;
        for (const Arc& a : arcs)
            if (a.head == v) terms.emplace_back(VarKey::x(a), 1.0);
        extra.push_back(Constraint{"F-term[v=" + idx(v) + "]", std::move(terms), Sense::Ge, 1.0});
    }
    Objective obj;
    obj.sense = ObjSense::Min;
    for (const Edge& e : inst.edges) {
        obj.terms.emplace_back(VarKey::x(e.u, e.v), e.cost);
        obj.terms.emplace_back(VarKey::x(e.v, e.u), e.cost);
    }
    HopTreeModel out{m.kind, m.instance, m.model.with_added_constraints(std::move(extra))};
    ModelBuilder b;
    for (const Variable& v : out.model.variables()) b.add_variable(v.key, v.lo, v.hi, v.integral);
    for (const Constraint& c : out.model.constraints()) b.add_constraint(c);
    b.set_objective(std::move(obj));
    out.model = b.build();
    return out;
}

HopTreeModel apply_stprbh(const HopTreeModel& m, const Instance& inst) {
    if (!inst.has_revenues() || !inst.budget)
        throw InvalidArgument("STPRBH needs revenues and budget on the instance");
    LinearTerms budget_terms;
    Objective obj;
    obj.sense = ObjSense::Max;
    obj.constant = inst.revenues[inst.root - 1];
    for (const Edge& e : inst.edges) {
        budget_terms.emplace_back(VarKey::x(e.u, e.v), e.cost);
        budget_terms.emplace_back(VarKey::x(e.v, e.u), e.cost);
        obj.terms.emplace_back(VarKey::x(e.u, e.v), inst.revenues[e.v - 1]);
        obj.terms.emplace_back(VarKey::x(e.v, e.u), inst.revenues[e.u - 1]);
    }
    // Zero-cost edges contribute nothing to the budget row.
    std::erase_if(budget_terms, [](const auto& t) { return t.second == 0.0; });
    std::erase_if(obj.terms, [](const auto& t) { return t.second == 0.0; });
    std::vector<Constraint> extra;
    extra.push_back(Constraint{"F-budget", std::move(budget_terms), Sense::Le, *inst.budget});
    HopTreeModel out{m.kind, m.instance, m.model.with_added_constraints(std::move(extra))};
    ModelBuilder b;
    for (const Variable& v : out.model.variables()) b.add_variable(v.key, v.lo, v.hi, v.integral);
    for (const Constraint& c : out.model.constraints()) b.add_constraint(c);
    b.set_objective(std::move(obj));
    out.model = b.build();
    return out;
}

HopTreeModel build_problem(const Instance& inst, ModelKind kind, ProblemKind problem) {
    Instance work = inst;
    if (problem == ProblemKind::HMSTP) {
        work.terminals.clear();
        for (int v = 1; v <= work.node_count; ++v) work.terminals.push_back(v);
    }
    HopTreeModel base = kind == ModelKind::P ? build_pht(work) : build_aht(work);
    switch (problem) {
        case ProblemKind::HT: return base;
        case ProblemKind::HSTP:
        case ProblemKind::HMSTP: return apply_hstp(base, work);
        case ProblemKind::STPRBH: return apply_stprbh(base, work);
    }
    throw InvalidArgument("unknown problem kind");
}

Point pop_to_assignment(const Point& p) {
    Point out;
    for (const auto& [key, value] : p.values)
        if (key.family == VarFamily::X) out.set(key, value);
    for (const auto& [key, value] : p.values) {
        if (key.family != VarFamily::L) continue;
        const VarKey gk = VarKey::g(key.a, key.b);
        out.set(VarKey::y(key.a, key.b), 1.0 - (value + p.at(gk)));
    }
    return out;
}

Point assignment_to_pop(const Point& p) {
    Point out;
    std::map<int, std::map<int, double>> levels;  // node -> level -> y
    for (const auto& [key, value] : p.values) {
        if (key.family == VarFamily::X) out.set(key, value);
        if (key.family == VarFamily::Y) levels[key.a][key.b] = value;
    }
    for (const auto& [node, row] : levels) {
        const int max_level = row.rbegin()->first;
        for (int i = 0; i <= max_level; ++i) {
            double below = 0.0, above = 0.0;
            for (const auto& [j, y] : row) {
                if (j < i) below += y;
                if (j > i) above += y;
            }
            out.set(VarKey::l(node, i), below);
            out.set(VarKey::g(node, i), above);
        }
    }
    return out;
}

int DecodedTree::max_depth() const {
    int d = 0;
    for (const auto& [node, depth_v] : depth) d = std::max(d, depth_v);
    return d;
}

DecodedTree decode_tree(const HopTreeModel& m, const Point& p, double tol) {
    DecodedTree tree;
    std::map<int, std::vector<int>> children;
    std::map<int, int> indeg;
    for (const Arc& a : m.instance.arcs()) {
        const double x = p.at(VarKey::x(a));
        if (x > 1.0 - tol) {
            tree.arcs.insert(a);
            children[a.tail].push_back(a.head);
            if (++indeg[a.head] > 1)
                throw SolveError("decoded arcs give node " + std::to_string(a.head) +
                                 " two incoming arcs");
        }
    }
    if (indeg.count(m.instance.root))
        throw SolveError("decoded arcs enter the root");
    tree.depth[m.instance.root] = 0;
    std::deque<int> queue{m.instance.root};
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int w : children[v]) {
            tree.depth[w] = tree.depth[v] + 1;
            queue.push_back(w);
        }
    }
    if (tree.depth.size() != tree.arcs.size() + 1)
        throw SolveError("decoded arcs are not connected to the root");
    if (tree.max_depth() > m.instance.hop_limit)
        throw SolveError("decoded tree exceeds the hop limit");
    return tree;
}

Constraint walk_cut(const Walk& w, int hop_limit, int root) {
    w.validate();
    if (w.length() != hop_limit)
        throw InvalidArgument("walk cut needs a walk with exactly H arcs");
    if (w.start() == root)
        throw InvalidArgument("walk cut walks must not start at the root");
    Constraint c;
    std::map<Arc, double> coeff;
    for (const Arc& a : w.arcs) coeff[a] += 1.0;
    c.id = "W-cut[";
    const auto nodes = w.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) c.id += '-';
        c.id += std::to_string(nodes[i]);
    }
    c.id += ']';
    for (const auto& [a, v] : coeff) c.terms.emplace_back(VarKey::x(a), v);
    c.sense = Sense::Le;
    c.rhs = hop_limit - 1;
    return c;
}

std::vector<SeparatedCut> separate_walk_cuts(const Instance& inst, const Point& p, double tol) {
    const int H = inst.hop_limit;
    std::vector<SeparatedCut> out;
    if (H < 1) return out;
    const int n = inst.node_count;
    const auto arcs = inst.arcs();
    std::vector<std::vector<std::pair<int, double>>> outgoing(n + 1);  // tail -> (head, x)
    for (const Arc& a : arcs) outgoing[a.tail].emplace_back(a.head, p.at(VarKey::x(a)));

    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    // best[k][v] = max total x over walks of k arcs starting at v. Internal
    // nodes are unconstrained; only the true start must avoid the root.
    std::vector<std::vector<double>> best(H + 1, std::vector<double>(n + 1, kNegInf));
    for (int v = 1; v <= n; ++v) best[0][v] = 0.0;
    for (int k = 1; k <= H; ++k)
        for (int v = 1; v <= n; ++v)
            for (const auto& [w, x] : outgoing[v])
                if (best[k - 1][w] != kNegInf)
                    best[k][v] = std::max(best[k][v], x + best[k - 1][w]);

    for (int start = 1; start <= n; ++start) {
        if (start == inst.root) continue;
        const double value = best[H][start];
        if (value == kNegInf || value <= H - 1 + tol) continue;
        // Reconstruct the lexicographically smallest optimal walk from here:
        // at each step take the smallest successor whose continuation value
        // matches the remaining optimum (up to roundoff).
        std::vector<int> nodes{start};
        int v = start;
        double remaining = value;
        for (int k = H; k >= 1; --k) {
            int chosen = 0;
            double chosen_x = 0.0;
            double best_gap = std::numeric_limits<double>::infinity();
            for (const auto& [w, x] : outgoing[v]) {
                if (best[k - 1][w] == kNegInf) continue;
                const double gap = std::abs(x + best[k - 1][w] - remaining);
                if (gap < best_gap - 1e-9 || (gap <= best_gap + 1e-9 && w < chosen)) {
                    best_gap = gap;
                    chosen = w;
                    chosen_x = x;
                }
            }
            nodes.push_back(chosen);
            remaining -= chosen_x;
            v = chosen;
        }
        out.push_back(SeparatedCut{Walk::from_nodes(nodes), value - (H - 1)});
    }
    std::sort(out.begin(), out.end(), [](const SeparatedCut& a, const SeparatedCut& b) {
        if (a.violation != b.violation) return a.violation > b.violation;
        return a.walk.nodes() < b.walk.nodes();
    });
    return out;
}

RootCutLoopResult root_cut_loop(const HopTreeModel& m, int max_rounds) {
    RootCutLoopResult res;
    Model current = relax(m.model);
    for (res.rounds = 1; res.rounds <= max_rounds; ++res.rounds) {
        const LpOutcome lp = solve_lp(current);
        if (lp.status != LpStatus::Optimal)
            throw SolveError("root cut loop: relaxation did not solve to optimality");
        res.lp_value = lp.objective;
        const auto cuts = separate_walk_cuts(m.instance, lp.point, 1e-6);
        if (cuts.empty()) return res;
        std::vector<Constraint> rows;
        for (const SeparatedCut& cut : cuts) {
            Constraint c = walk_cut(cut.walk, m.instance.hop_limit, m.instance.root);
            c.id = "W-cut[r" + std::to_string(res.rounds) + "]" + c.id.substr(5);
            rows.push_back(std::move(c));
        }
        res.cuts_added += static_cast<int>(rows.size());
        current = current.with_added_constraints(std::move(rows));
    }
    throw SolveError("root cut loop did not converge within the round limit");
}

}  // namespace hoptree
