// Test-only oracles: brute-force enumeration of hop-constrained trees,
// Kruskal spanning trees, exhaustive walk search, and an LP optimality
// certificate checker. Everything here is independent of the solver and
// model-building code paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "hoptree/instance.hpp"
#include "hoptree/model.hpp"
#include "hoptree/simplex.hpp"

namespace oracle {

using hoptree::Arc;
using hoptree::Instance;
using hoptree::Walk;

struct TreeEval {
    bool is_tree = false;       // connected, acyclic, contains the root
    double cost = 0.0;
    int depth = 0;              // max BFS depth from the root
    std::set<int> nodes;
    std::set<Arc> arcs;         // oriented away from the root
    double revenue = 0.0;       // node revenues incl. root (when present)
};

// Evaluates one edge subset as a candidate rooted tree.
inline TreeEval evaluate_subset(const Instance& inst, const std::vector<int>& edge_ids) {
    TreeEval ev;
    std::map<int, std::vector<std::pair<int, double>>> adj;
    for (int id : edge_ids) {
        const auto& e = inst.edges[id];
        adj[e.u].push_back({e.v, e.cost});
        adj[e.v].push_back({e.u, e.cost});
        ev.cost += e.cost;
    }
    // BFS from the root over chosen edges.
    std::map<int, int> depth;
    depth[inst.root] = 0;
    std::vector<int> queue{inst.root};
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const int v = queue[q];
        for (const auto& [w, c] : adj[v]) {
            if (depth.count(w)) continue;
            depth[w] = depth[v] + 1;
            ev.arcs.insert(Arc{v, w});
            queue.push_back(w);
        }
    }
    // A tree touching the root: every chosen edge reached, no cycle.
    if (depth.size() != edge_ids.size() + 1) return ev;
    std::set<int> touched;
    for (int id : edge_ids) {
        touched.insert(inst.edges[id].u);
        touched.insert(inst.edges[id].v);
    }
    touched.insert(inst.root);
    if (touched.size() != depth.size()) return ev;
    ev.is_tree = true;
    for (const auto& [v, d] : depth) {
        ev.nodes.insert(v);
        ev.depth = std::max(ev.depth, d);
        if (inst.has_revenues()) ev.revenue += inst.revenues[v - 1];
    }
    return ev;
}

template <typename Fn>
void for_each_subset_up_to(int m, int max_size, Fn&& fn) {
    std::vector<int> ids;
    const auto recurse = [&](auto&& self, int next) -> void {
        fn(ids);
        if (static_cast<int>(ids.size()) == max_size) return;
        for (int e = next; e < m; ++e) {
            ids.push_back(e);
            self(self, e + 1);
            ids.pop_back();
        }
    };
    recurse(recurse, 0);
}

// Minimum cost over all depth<=H trees containing the instance terminals.
// Returns nullopt when no such tree exists.
inline std::optional<double> best_steiner_tree(const Instance& inst) {
    std::optional<double> best;
    for_each_subset_up_to(inst.edge_count(), inst.node_count - 1, [&](const std::vector<int>& ids) {
        const TreeEval ev = evaluate_subset(inst, ids);
        if (!ev.is_tree || ev.depth > inst.hop_limit) return;
        for (int t : inst.terminals)
            if (!ev.nodes.count(t)) return;
        if (!best || ev.cost < *best) best = ev.cost;
    });
    return best;
}

// Maximum revenue over all depth<=H trees containing the root with cost
// within the budget.
inline double best_revenue_tree(const Instance& inst) {
    double best = inst.revenues[inst.root - 1];  // the lone root is always affordable
    for_each_subset_up_to(inst.edge_count(), inst.node_count - 1, [&](const std::vector<int>& ids) {
        const TreeEval ev = evaluate_subset(inst, ids);
        if (!ev.is_tree || ev.depth > inst.hop_limit || ev.cost > *inst.budget + 1e-9) return;
        best = std::max(best, ev.revenue);
    });
    return best;
}

// Kruskal minimum spanning tree cost; nullopt when disconnected.
inline std::optional<double> kruskal_mst(const Instance& inst) {
    std::vector<int> order(inst.edge_count());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return inst.edges[a].cost < inst.edges[b].cost; });
    std::vector<int> parent(inst.node_count + 1);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    double cost = 0.0;
    int picked = 0;
    for (int id : order) {
        const int a = find(inst.edges[id].u);
        const int b = find(inst.edges[id].v);
        if (a == b) continue;
        parent[a] = b;
        cost += inst.edges[id].cost;
        ++picked;
    }
    if (picked != inst.node_count - 1) return std::nullopt;
    return cost;
}

// Every walk with exactly `len` arcs whose start differs from the root.
inline std::vector<Walk> all_walks(const Instance& inst, int len) {
    std::vector<Walk> out;
    std::map<int, std::vector<int>> next;
    for (const Arc& a : inst.arcs()) next[a.tail].push_back(a.head);
    std::vector<int> nodes;
    const auto recurse = [&](auto&& self) -> void {
        if (static_cast<int>(nodes.size()) == len + 1) {
            out.push_back(Walk::from_nodes(nodes));
            return;
        }
        for (int w : next[nodes.back()]) {
            nodes.push_back(w);
            self(self);
            nodes.pop_back();
        }
    };
    for (int v = 1; v <= inst.node_count; ++v) {
        if (v == inst.root) continue;
        nodes = {v};
        recurse(recurse);
    }
    return out;
}

// All integral hop-constrained trees of an instance as oriented arc sets.
inline std::vector<std::set<Arc>> all_hop_trees(const Instance& inst) {
    std::vector<std::set<Arc>> out;
    for_each_subset_up_to(inst.edge_count(), inst.node_count - 1, [&](const std::vector<int>& ids) {
        const TreeEval ev = evaluate_subset(inst, ids);
        if (ev.is_tree && ev.depth <= inst.hop_limit) out.push_back(ev.arcs);
    });
    return out;
}

// Weak-duality certificate for a reported LP optimum: checks the dual sign
// conditions and that the dual bound matches the primal objective.
inline bool certify_lp_optimum(const hoptree::Model& m, const hoptree::LpOutcome& lp,
                               double tol = 1e-6) {
    using namespace hoptree;
    if (lp.status != LpStatus::Optimal) return false;
    if (!violated_constraints(m, lp.point, tol).empty()) return false;
    if (lp.row_duals.size() != static_cast<std::size_t>(m.constraint_count())) return false;
    const bool maximize = m.objective().sense == ObjSense::Max;
    const double sgn = maximize ? -1.0 : 1.0;  // fold into min convention
    for (int r = 0; r < m.constraint_count(); ++r) {
        const double y = sgn * lp.row_duals[r];
        switch (m.constraints()[r].sense) {
            case Sense::Le:
                if (y > tol) return false;
                break;
            case Sense::Ge:
                if (y < -tol) return false;
                break;
            case Sense::Eq: break;
        }
    }
    // Reduced costs from the model data, then the dual bound.
    std::map<VarKey, double> reduced;
    for (const Variable& v : m.variables()) reduced[v.key] = 0.0;
    for (const auto& [key, c] : m.objective().terms) reduced[key] += sgn * c;
    for (int r = 0; r < m.constraint_count(); ++r)
        for (const auto& [key, a] : m.constraints()[r].terms)
            reduced[key] -= sgn * lp.row_duals[r] * a;
    double dual_bound = m.objective().constant * sgn;
    for (int r = 0; r < m.constraint_count(); ++r)
        dual_bound += sgn * lp.row_duals[r] * m.constraints()[r].rhs;
    double scale = 1.0;
    for (const Variable& v : m.variables()) {
        const double d = reduced[v.key];
        dual_bound += d > 0 ? d * v.lo : d * v.hi;
        scale = std::max(scale, std::abs(d));
    }
    const double primal = sgn * lp.objective;
    return std::abs(primal - dual_bound) <= tol * std::max(scale, std::abs(primal) + 1.0);
}

}  // namespace oracle
