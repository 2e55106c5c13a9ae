#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hoptree/instance.hpp"

namespace hoptree {

/// Structured variable name. X(u,v) is the arc selector; L(v,i), G(v,i) are
/// the threshold variables ("position of v below/above level i"); Y(v,i) is
/// the one-hot level variable.
enum class VarFamily : std::uint8_t { X, L, G, Y };

struct VarKey {
    VarFamily family = VarFamily::X;
    int a = 0;  // X: tail,  L/G/Y: node
    int b = 0;  // X: head,  L/G/Y: level

    static VarKey x(int tail, int head) { return {VarFamily::X, tail, head}; }
    static VarKey x(Arc arc) { return {VarFamily::X, arc.tail, arc.head}; }
    static VarKey l(int node, int level) { return {VarFamily::L, node, level}; }
    static VarKey g(int node, int level) { return {VarFamily::G, node, level}; }
    static VarKey y(int node, int level) { return {VarFamily::Y, node, level}; }

    std::string name() const;  // "x[1,2]", "l[3,0]", ...
    static std::optional<VarKey> parse(std::string_view name);

    friend auto operator<=>(const VarKey&, const VarKey&) = default;
};

struct VarKeyHash {
    std::size_t operator()(const VarKey& k) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(k.family);
        h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::uint32_t>(k.a);
        h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::uint32_t>(k.b);
        h ^= h >> 31;
        return static_cast<std::size_t>(h);
    }
};

using LinearTerms = std::vector<std::pair<VarKey, double>>;

enum class Sense : std::uint8_t { Le, Ge, Eq };

struct Constraint {
    std::string id;  // family tag + indices, e.g. "F-excl[v=3,i=1]"
    LinearTerms terms;
    Sense sense = Sense::Le;
    double rhs = 0.0;
};

struct Variable {
    VarKey key;
    double lo = 0.0;
    double hi = 1.0;
    bool integral = false;
};

enum class ObjSense : std::uint8_t { Min, Max };

struct Objective {
    ObjSense sense = ObjSense::Min;
    LinearTerms terms;
    double constant = 0.0;
};

/// Immutable linear program with a variable directory. Construct via
/// ModelBuilder; "mutation" helpers return a new Model.
class Model {
public:
    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const Objective& objective() const { return objective_; }

    int variable_count() const { return static_cast<int>(variables_.size()); }
    int constraint_count() const { return static_cast<int>(constraints_.size()); }

    /// Column index of a declared variable; throws InvalidArgument if unknown.
    int column(const VarKey& key) const;
    std::optional<int> find_column(const VarKey& key) const;

    Model with_added_constraints(std::vector<Constraint> extra) const;

private:
    friend class ModelBuilder;
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    Objective objective_;
    std::unordered_map<VarKey, int, VarKeyHash> columns_;
};

class ModelBuilder {
public:
    int add_variable(VarKey key, double lo, double hi, bool integral);
    void add_constraint(Constraint c);
    void set_objective(Objective o) { objective_ = std::move(o); }

    /// Validates (declared terms, lo <= hi, unique ids) and freezes.
    Model build();

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    Objective objective_;
    std::unordered_map<VarKey, int, VarKeyHash> columns_;
};

/// Dense assignment of values to variables, keyed by VarKey.
struct Point {
    std::unordered_map<VarKey, double, VarKeyHash> values;

    /// Value of key; throws InvalidArgument naming the key when absent.
    double at(const VarKey& key) const;
    bool contains(const VarKey& key) const { return values.count(key) != 0; }
    void set(const VarKey& key, double v) { values[key] = v; }
    std::size_t size() const { return values.size(); }
};

struct Violation {
    std::string constraint_id;  // constraint id, or "B-lo[...]"/"B-up[...]" for bounds
    double amount = 0.0;
};

/// objective constant + sum of coefficient * value. Requires the point to
/// cover every objective variable.
double evaluate_objective(const Model& m, const Point& p);

/// Every constraint whose residual exceeds tol, plus bound violations, in
/// model order. Empty result == p is tol-feasible for the LP relaxation.
std::vector<Violation> violated_constraints(const Model& m, const Point& p, double tol);

/// Same model with all integrality flags cleared.
Model relax(const Model& m);

}  // namespace hoptree
