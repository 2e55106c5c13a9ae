#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hoptree {

/// Directed edge (u,v). Arcs exist in both directions for every undirected
/// edge of the instance.
struct Arc {
    int tail = 0;
    int head = 0;

    friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Directed walk: a chained, nonempty arc sequence. Nodes and arcs may
/// repeat.
struct Walk {
    std::vector<Arc> arcs;

    static Walk from_nodes(const std::vector<int>& nodes);

    int length() const { return static_cast<int>(arcs.size()); }
    int start() const { return arcs.front().tail; }
    int end() const { return arcs.back().head; }
    std::vector<int> nodes() const;

    /// Throws InvalidArgument unless the sequence is nonempty and chained.
    void validate() const;

    friend bool operator==(const Walk&, const Walk&) = default;
};

struct Edge {
    int u = 0;  // u < v
    int v = 0;
    double cost = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Rooted weighted graph with terminal set and hop limit. Nodes are 1..n.
/// Revenues and budget are present together or not at all (STPRBH data).
struct Instance {
    int node_count = 0;
    int root = 0;
    int hop_limit = 0;
    std::vector<Edge> edges;       // u < v, no duplicates
    std::vector<int> terminals;    // sorted, contains root
    std::vector<double> revenues;  // empty, or node_count entries (node v at index v-1)
    std::optional<double> budget;

    bool has_revenues() const { return !revenues.empty(); }
    bool is_terminal(int v) const;
    bool all_terminals() const { return static_cast<int>(terminals.size()) == node_count; }
    bool has_arc(int u, int v) const;
    int edge_count() const { return static_cast<int>(edges.size()); }

    /// Both orientations of every edge, sorted by (tail, head).
    std::vector<Arc> arcs() const;

    /// Throws InvalidArgument on any violated structural invariant.
    void validate() const;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Complete graph on n nodes with integer coordinates drawn uniformly from
/// {0..grid}^2 and costs = Euclidean distance rounded to nearest integer
/// (floored at 1). Root = n, terminals = all, hop limit = n-1.
Instance generate_euclidean(int n, std::uint64_t seed, int grid);

/// Complete graph with i.i.d. uniform integer costs in [cost_min, cost_max].
/// Root = n, terminals = all, hop limit = n-1.
Instance generate_random(int n, std::uint64_t seed, int cost_min, int cost_max);

/// Copy with terminals = {1..floor(n/2)} + root. Requires root = n (the
/// generator convention).
Instance derive_hstp_terminals(const Instance& inst);

Instance parse_instance(std::istream& in);
Instance parse_instance(const std::string& text);

void write_instance(const Instance& inst, std::ostream& out);
std::string write_instance(const Instance& inst);

}  // namespace hoptree
