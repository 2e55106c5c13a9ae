// Shared fixtures: the K4 configuration used by the worked feasibility
// examples and the seeded instance battery used by the strength and
// equivalence suites.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hoptree/formulations.hpp"
#include "hoptree/instance.hpp"

namespace fixtures {

using namespace hoptree;

// Complete K4 with nodes a=1, b=2, c=3 and root r=4; unit costs unless
// given; hop limit 2; all nodes terminals.
inline Instance k4(double root_edge_cost = 1.0, double other_edge_cost = 1.0, int hop = 2) {
    Instance inst;
    inst.node_count = 4;
    inst.root = 4;
    inst.hop_limit = hop;
    inst.terminals = {1, 2, 3, 4};
    for (int u = 1; u <= 4; ++u)
        for (int v = u + 1; v <= 4; ++v)
            inst.edges.push_back(Edge{u, v, v == 4 ? root_edge_cost : other_edge_cost});
    inst.validate();
    return inst;
}

// Threshold-model point: the root feeds all three leaves placed at level 2
// (positions may skip levels in the threshold model).
inline Point example1_point() {
    Point p;
    for (int u = 1; u <= 4; ++u)
        for (int v = 1; v <= 4; ++v)
            if (u != v) p.set(VarKey::x(u, v), 0.0);
    p.set(VarKey::x(4, 1), 1.0);
    p.set(VarKey::x(4, 2), 1.0);
    p.set(VarKey::x(4, 3), 1.0);
    const double g_root[3] = {0.0, 0.0, 0.0};
    const double g_leaf[3] = {1.0, 1.0, 0.0};
    for (int v = 1; v <= 4; ++v) {
        const double* g = v == 4 ? g_root : g_leaf;
        for (int i = 0; i <= 2; ++i) p.set(VarKey::g(v, i), g[i]);
        p.set(VarKey::l(v, 0), 0.0);
        for (int i = 0; i < 2; ++i) p.set(VarKey::l(v, i + 1), 1.0 - g[i]);
    }
    return p;
}

// One-hot-model point: the fractional directed triangle among the leaves.
inline Point example2_point() {
    Point p;
    for (int u = 1; u <= 4; ++u)
        for (int v = 1; v <= 4; ++v)
            if (u != v) p.set(VarKey::x(u, v), 0.0);
    p.set(VarKey::x(1, 2), 2.0 / 3.0);
    p.set(VarKey::x(2, 3), 2.0 / 3.0);
    p.set(VarKey::x(3, 1), 2.0 / 3.0);
    p.set(VarKey::x(2, 1), 1.0 / 3.0);
    p.set(VarKey::x(1, 3), 1.0 / 3.0);
    p.set(VarKey::x(3, 2), 1.0 / 3.0);
    p.set(VarKey::y(4, 0), 1.0);
    p.set(VarKey::y(4, 1), 0.0);
    p.set(VarKey::y(4, 2), 0.0);
    for (int v = 1; v <= 3; ++v) {
        p.set(VarKey::y(v, 0), 0.0);
        p.set(VarKey::y(v, 1), 2.0 / 3.0);
        p.set(VarKey::y(v, 2), 1.0 / 3.0);
    }
    return p;
}

struct BatteryEntry {
    std::string name;
    Instance instance;  // hop limit already set
    ProblemKind problem;
};

// Deterministic revenues and a budget at roughly half the star cost, so the
// budget genuinely binds.
inline Instance attach_revenues(Instance inst, std::uint64_t seed) {
    inst.revenues.resize(inst.node_count);
    for (int v = 1; v <= inst.node_count; ++v)
        inst.revenues[v - 1] = static_cast<double>((v * 7 + seed * 3 + 1) % 20 + 1);
    double star = 0.0;
    for (const Edge& e : inst.edges)
        if (e.u == inst.root || e.v == inst.root) star += e.cost;
    inst.budget = std::floor(star / 2.0);
    inst.validate();
    return inst;
}

// The seeded battery: n in 4..8, Euclidean-style and uniform-random-style
// families, hop limits 2..4, all three problems.
inline std::vector<BatteryEntry> battery(const std::vector<int>& hops = {2, 3, 4}) {
    std::vector<BatteryEntry> out;
    for (int n = 4; n <= 8; ++n) {
        for (int fam = 0; fam < 2; ++fam) {
            const std::uint64_t seed = 100 * (fam + 1) + n;
            Instance base = fam == 0 ? generate_euclidean(n, seed, 100)
                                     : generate_random(n, seed, 1, 100);
            const std::string fam_name = fam == 0 ? "tc" : "tr";
            for (int hop : hops) {
                Instance inst = base;
                inst.hop_limit = hop;
                const std::string tag = fam_name + std::to_string(n) + "_h" + std::to_string(hop);
                out.push_back({tag + "_hmstp", inst, ProblemKind::HMSTP});
                out.push_back({tag + "_hstp", derive_hstp_terminals(inst), ProblemKind::HSTP});
                out.push_back({tag + "_stprbh", attach_revenues(inst, seed), ProblemKind::STPRBH});
            }
        }
    }
    return out;
}

}  // namespace fixtures
