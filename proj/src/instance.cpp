#include "hoptree/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "hoptree/errors.hpp"
#include "hoptree/rng.hpp"

namespace hoptree {

Walk Walk::from_nodes(const std::vector<int>& nodes) {
    if (nodes.size() < 2) throw InvalidArgument("walk needs at least two nodes");
    Walk w;
    w.arcs.reserve(nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        w.arcs.push_back(Arc{nodes[i], nodes[i + 1]});
    w.validate();
    return w;
}

std::vector<int> Walk::nodes() const {
    std::vector<int> out;
    out.reserve(arcs.size() + 1);
    out.push_back(arcs.front().tail);
    for (const Arc& a : arcs) out.push_back(a.head);
    return out;
}

void Walk::validate() const {
    if (arcs.empty()) throw InvalidArgument("walk must contain at least one arc");
    for (const Arc& a : arcs)
        if (a.tail == a.head) throw InvalidArgument("walk contains a self-loop arc");
    for (std::size_t i = 0; i + 1 < arcs.size(); ++i)
        if (arcs[i].head != arcs[i + 1].tail)
            throw InvalidArgument("walk arcs do not chain");
}

bool Instance::is_terminal(int v) const {
    return std::binary_search(terminals.begin(), terminals.end(), v);
}

bool Instance::has_arc(int u, int v) const {
    if (u == v) return false;
    const Edge probe{std::min(u, v), std::max(u, v), 0.0};
    auto it = std::lower_bound(edges.begin(), edges.end(), probe,
                               [](const Edge& a, const Edge& b) {
                                   return std::tie(a.u, a.v) < std::tie(b.u, b.v);
                               });
    return it != edges.end() && it->u == probe.u && it->v == probe.v;
}

std::vector<Arc> Instance::arcs() const {
    std::vector<Arc> out;
    out.reserve(2 * edges.size());
    for (const Edge& e : edges) {
        out.push_back(Arc{e.u, e.v});
        out.push_back(Arc{e.v, e.u});
    }
    std::sort(out.begin(), out.end());
    return out;
}

void Instance::validate() const {
    if (node_count < 1) throw InvalidArgument("node count must be at least 1");
    if (root < 1 || root > node_count) throw InvalidArgument("root out of range");
    if (hop_limit < 0) throw InvalidArgument("hop limit must be nonnegative");
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : edges) {
        if (e.u < 1 || e.u > node_count || e.v < 1 || e.v > node_count)
            throw InvalidArgument("edge endpoint out of range");
        if (e.u == e.v) throw InvalidArgument("self-loop edge");
        if (e.u > e.v) throw InvalidArgument("edge endpoints must satisfy u < v");
        if (e.cost < 0) throw InvalidArgument("negative edge cost");
        if (!seen.insert({e.u, e.v}).second) throw InvalidArgument("duplicate edge");
    }
    if (terminals.empty()) throw InvalidArgument("terminal set is empty");
    if (!std::is_sorted(terminals.begin(), terminals.end()))
        throw InvalidArgument("terminals must be sorted");
    for (std::size_t i = 0; i + 1 < terminals.size(); ++i)
        if (terminals[i] == terminals[i + 1]) throw InvalidArgument("duplicate terminal");
    for (int t : terminals)
        if (t < 1 || t > node_count) throw InvalidArgument("terminal out of range");
    if (!is_terminal(root)) throw InvalidArgument("root must be a terminal");
    if (!revenues.empty() && static_cast<int>(revenues.size()) != node_count)
        throw InvalidArgument("revenues must list one value per node");
    for (double r : revenues)
        if (r < 0) throw InvalidArgument("negative revenue");
    if (revenues.empty() != !budget.has_value())
        throw InvalidArgument("revenues and budget must be present together");
    if (budget && *budget < 0) throw InvalidArgument("negative budget");
}

namespace {

std::vector<int> all_nodes(int n) {
    std::vector<int> out(n);
    for (int v = 1; v <= n; ++v) out[v - 1] = v;
    return out;
}

}  // namespace

Instance generate_euclidean(int n, std::uint64_t seed, int grid) {
    if (n < 2) throw InvalidArgument("generate_euclidean needs n >= 2");
    if (grid < 1) throw InvalidArgument("generate_euclidean needs grid >= 1");
    SplitMix64 rng(seed);
    std::vector<std::pair<int, int>> coord(n + 1);
    for (int v = 1; v <= n; ++v) {
        coord[v].first = static_cast<int>(rng.uniform_int(0, grid));
        coord[v].second = static_cast<int>(rng.uniform_int(0, grid));
    }
    Instance inst;
    inst.node_count = n;
    inst.root = n;
    inst.hop_limit = n - 1;
    inst.terminals = all_nodes(n);
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v) {
            const double dx = coord[u].first - coord[v].first;
            const double dy = coord[u].second - coord[v].second;
            const double c = std::max(1.0, std::round(std::hypot(dx, dy)));
            inst.edges.push_back(Edge{u, v, c});
        }
    inst.validate();
    return inst;
}

Instance generate_random(int n, std::uint64_t seed, int cost_min, int cost_max) {
    if (n < 2) throw InvalidArgument("generate_random needs n >= 2");
    if (cost_min < 0 || cost_min > cost_max)
        throw InvalidArgument("generate_random needs 0 <= cost_min <= cost_max");
    SplitMix64 rng(seed);
    Instance inst;
    inst.node_count = n;
    inst.root = n;
    inst.hop_limit = n - 1;
    inst.terminals = all_nodes(n);
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v)
            inst.edges.push_back(
                Edge{u, v, static_cast<double>(rng.uniform_int(cost_min, cost_max))});
    inst.validate();
    return inst;
}

Instance derive_hstp_terminals(const Instance& inst) {
    if (inst.root != inst.node_count)
        throw InvalidArgument("derive_hstp_terminals expects root = node count");
    Instance out = inst;
    out.terminals.clear();
    for (int v = 1; v <= inst.node_count / 2; ++v) out.terminals.push_back(v);
    if (!std::binary_search(out.terminals.begin(), out.terminals.end(), inst.root))
        out.terminals.push_back(inst.root);
    out.validate();
    return out;
}

namespace {

// Number formatting for the canonical instance format: integers without a
// decimal point, everything else with enough digits to round-trip.
std::string format_number(double x) {
    if (x == std::floor(x) && std::abs(x) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", x);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct LineReader {
    std::istream& in;
    int line_no = 0;

    // Next non-empty line with comments stripped; false at EOF.
    bool next(std::string& out) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            // trim
            const auto b = raw.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) continue;
            const auto e = raw.find_last_not_of(" \t\r\n");
            out = raw.substr(b, e - b + 1);
            return true;
        }
        return false;
    }
};

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

int parse_int(const std::string& tok, int line, const char* what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, std::string("expected integer for ") + what + ", got '" + tok + "'");
    }
}

double parse_num(const std::string& tok, int line, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, std::string("expected number for ") + what + ", got '" + tok + "'");
    }
}

}  // namespace

Instance parse_instance(std::istream& in) {
    LineReader rd{in};
    std::string line;

    if (!rd.next(line)) throw ParseError(rd.line_no, "empty input, expected 'HOPTREE 1' header");
    {
        auto toks = split_tokens(line);
        if (toks.size() != 2 || toks[0] != "HOPTREE" || toks[1] != "1")
            throw ParseError(rd.line_no, "expected 'HOPTREE 1' header");
    }

    Instance inst;
    if (!rd.next(line)) throw ParseError(rd.line_no, "missing 'nodes' line");
    {
        auto toks = split_tokens(line);
        if (toks.size() != 6 || toks[0] != "nodes" || toks[2] != "root" || toks[4] != "hop")
            throw ParseError(rd.line_no, "expected 'nodes <n> root <r> hop <H>'");
        inst.node_count = parse_int(toks[1], rd.line_no, "node count");
        inst.root = parse_int(toks[3], rd.line_no, "root");
        inst.hop_limit = parse_int(toks[5], rd.line_no, "hop limit");
        if (inst.node_count < 1) throw ParseError(rd.line_no, "node count must be at least 1");
        if (inst.root < 1 || inst.root > inst.node_count)
            throw ParseError(rd.line_no, "root out of range");
        if (inst.hop_limit < 0) throw ParseError(rd.line_no, "hop limit must be nonnegative");
    }

    if (!rd.next(line)) throw ParseError(rd.line_no, "missing 'edges' line");
    auto toks = split_tokens(line);

    bool terminals_given = false;
    if (toks[0] == "terminals") {
        terminals_given = true;
        if (toks.size() < 2) throw ParseError(rd.line_no, "expected 'terminals <k> <v...>'");
        const int k = parse_int(toks[1], rd.line_no, "terminal count");
        if (static_cast<int>(toks.size()) != 2 + k)
            throw ParseError(rd.line_no, "terminal count does not match listed terminals");
        for (int i = 0; i < k; ++i) {
            const int v = parse_int(toks[2 + i], rd.line_no, "terminal");
            if (v < 1 || v > inst.node_count) throw ParseError(rd.line_no, "terminal out of range");
            inst.terminals.push_back(v);
        }
        std::sort(inst.terminals.begin(), inst.terminals.end());
        inst.terminals.erase(std::unique(inst.terminals.begin(), inst.terminals.end()),
                             inst.terminals.end());
        if (!std::binary_search(inst.terminals.begin(), inst.terminals.end(), inst.root))
            throw ParseError(rd.line_no, "terminal set must contain the root");
        if (!rd.next(line)) throw ParseError(rd.line_no, "missing 'edges' line");
        toks = split_tokens(line);
    }
    if (!terminals_given)
        for (int v = 1; v <= inst.node_count; ++v) inst.terminals.push_back(v);

    int budget_line = 0;
    if (toks[0] == "budget") {
        if (toks.size() != 2) throw ParseError(rd.line_no, "expected 'budget <B>'");
        inst.budget = parse_num(toks[1], rd.line_no, "budget");
        if (*inst.budget < 0) throw ParseError(rd.line_no, "budget must be nonnegative");
        budget_line = rd.line_no;
        if (!rd.next(line)) throw ParseError(rd.line_no, "missing 'revenues' line after budget");
        toks = split_tokens(line);
    }

    if (toks[0] == "revenues") {
        if (static_cast<int>(toks.size()) != 1 + inst.node_count)
            throw ParseError(rd.line_no, "expected one revenue per node");
        for (int v = 0; v < inst.node_count; ++v) {
            const double r = parse_num(toks[1 + v], rd.line_no, "revenue");
            if (r < 0) throw ParseError(rd.line_no, "revenues must be nonnegative");
            inst.revenues.push_back(r);
        }
        if (!inst.budget)
            throw ParseError(rd.line_no, "revenues are present but no budget line precedes them");
        if (!rd.next(line)) throw ParseError(rd.line_no, "missing 'edges' line");
        toks = split_tokens(line);
    } else if (inst.budget) {
        throw ParseError(budget_line, "budget is present but revenues are missing");
    }

    if (toks.size() != 2 || toks[0] != "edges")
        throw ParseError(rd.line_no, "expected 'edges <m>'");
    const int m = parse_int(toks[1], rd.line_no, "edge count");
    if (m < 0) throw ParseError(rd.line_no, "edge count must be nonnegative");

    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < m; ++i) {
        if (!rd.next(line)) throw ParseError(rd.line_no, "unexpected end of file inside edge list");
        auto et = split_tokens(line);
        if (et.size() != 3) throw ParseError(rd.line_no, "expected '<u> <v> <cost>'");
        Edge e;
        e.u = parse_int(et[0], rd.line_no, "edge endpoint");
        e.v = parse_int(et[1], rd.line_no, "edge endpoint");
        e.cost = parse_num(et[2], rd.line_no, "edge cost");
        if (e.u < 1 || e.u > inst.node_count || e.v < 1 || e.v > inst.node_count)
            throw ParseError(rd.line_no, "edge endpoint out of range");
        if (e.u == e.v) throw ParseError(rd.line_no, "self-loop edge");
        if (e.u > e.v) throw ParseError(rd.line_no, "edge endpoints must satisfy u < v");
        if (e.cost < 0) throw ParseError(rd.line_no, "edge cost must be nonnegative");
        if (!seen.insert({e.u, e.v}).second) throw ParseError(rd.line_no, "duplicate edge");
        inst.edges.push_back(e);
    }
    if (rd.next(line)) throw ParseError(rd.line_no, "trailing content after edge list");

    std::sort(inst.edges.begin(), inst.edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    inst.validate();
    return inst;
}

Instance parse_instance(const std::string& text) {
    std::istringstream ss(text);
    return parse_instance(ss);
}

void write_instance(const Instance& inst, std::ostream& out) {
    inst.validate();
    out << "HOPTREE 1\n";
    out << "nodes " << inst.node_count << " root " << inst.root << " hop " << inst.hop_limit
        << "\n";
    if (!inst.all_terminals()) {
        out << "terminals " << inst.terminals.size();
        for (int t : inst.terminals) out << ' ' << t;
        out << "\n";
    }
    if (inst.budget) out << "budget " << format_number(*inst.budget) << "\n";
    if (inst.has_revenues()) {
        out << "revenues";
        for (double r : inst.revenues) out << ' ' << format_number(r);
        out << "\n";
    }
    out << "edges " << inst.edges.size() << "\n";
    for (const Edge& e : inst.edges)
        out << e.u << ' ' << e.v << ' ' << format_number(e.cost) << "\n";
}

std::string write_instance(const Instance& inst) {
    std::ostringstream ss;
    write_instance(inst, ss);
    return ss.str();
}

}  // namespace hoptree
