#include "hoptree/model.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "hoptree/errors.hpp"

namespace hoptree {

std::string VarKey::name() const {
    const char* tag = nullptr;
    switch (family) {
        case VarFamily::X: tag = "x"; break;
        case VarFamily::L: tag = "l"; break;
        case VarFamily::G: tag = "g"; break;
        case VarFamily::Y: tag = "y"; break;
    }
    return std::string(tag) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}

std::optional<VarKey> VarKey::parse(std::string_view s) {
    if (s.size() < 6 || s[1] != '[' || s.back() != ']') return std::nullopt;
    VarFamily fam;
    switch (s[0]) {
        case 'x': fam = VarFamily::X; break;
        case 'l': fam = VarFamily::L; break;
        case 'g': fam = VarFamily::G; break;
        case 'y': fam = VarFamily::Y; break;
        default: return std::nullopt;
    }
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    int a = 0, b = 0;
    const char* p1 = s.data() + 2;
    const char* e1 = s.data() + comma;
    const char* p2 = s.data() + comma + 1;
    const char* e2 = s.data() + s.size() - 1;
    auto r1 = std::from_chars(p1, e1, a);
    auto r2 = std::from_chars(p2, e2, b);
    if (r1.ec != std::errc{} || r1.ptr != e1 || r2.ec != std::errc{} || r2.ptr != e2)
        return std::nullopt;
    return VarKey{fam, a, b};
}

int Model::column(const VarKey& key) const {
    auto it = columns_.find(key);
    if (it == columns_.end())
        throw InvalidArgument("unknown variable " + key.name());
    return it->second;
}

std::optional<int> Model::find_column(const VarKey& key) const {
    auto it = columns_.find(key);
    if (it == columns_.end()) return std::nullopt;
    return it->second;
}

Model Model::with_added_constraints(std::vector<Constraint> extra) const {
    ModelBuilder b;
    for (const Variable& v : variables_) b.add_variable(v.key, v.lo, v.hi, v.integral);
    for (const Constraint& c : constraints_) b.add_constraint(c);
    for (Constraint& c : extra) b.add_constraint(std::move(c));
    b.set_objective(objective_);
    return b.build();
}

int ModelBuilder::add_variable(VarKey key, double lo, double hi, bool integral) {
    if (columns_.count(key)) throw InvalidArgument("duplicate variable " + key.name());
    if (lo > hi) throw InvalidArgument("variable " + key.name() + " has lo > hi");
    const int col = static_cast<int>(variables_.size());
    variables_.push_back(Variable{key, lo, hi, integral});
    columns_.emplace(key, col);
    return col;
}

void ModelBuilder::add_constraint(Constraint c) {
    std::set<VarKey> seen;
    for (const auto& [key, coeff] : c.terms) {
        if (!columns_.count(key))
            throw InvalidArgument("constraint " + c.id + " references undeclared " + key.name());
        if (coeff == 0.0)
            throw InvalidArgument("constraint " + c.id + " has a zero coefficient on " + key.name());
        if (!seen.insert(key).second)
            throw InvalidArgument("constraint " + c.id + " repeats variable " + key.name());
    }
    constraints_.push_back(std::move(c));
}

Model ModelBuilder::build() {
    std::set<std::string> ids;
    for (const Constraint& c : constraints_)
        if (!ids.insert(c.id).second) throw InvalidArgument("duplicate constraint id " + c.id);
    for (const auto& [key, coeff] : objective_.terms) {
        (void)coeff;
        if (!columns_.count(key))
            throw InvalidArgument("objective references undeclared " + key.name());
    }
    Model m;
    m.variables_ = std::move(variables_);
    m.constraints_ = std::move(constraints_);
    m.objective_ = std::move(objective_);
    m.columns_ = std::move(columns_);
    return m;
}

double Point::at(const VarKey& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw InvalidArgument("point has no value for " + key.name());
    return it->second;
}

double evaluate_objective(const Model& m, const Point& p) {
    double total = m.objective().constant;
    for (const auto& [key, coeff] : m.objective().terms) total += coeff * p.at(key);
    return total;
}

std::vector<Violation> violated_constraints(const Model& m, const Point& p, double tol) {
    if (tol < 0) throw InvalidArgument("tolerance must be nonnegative");
    std::vector<Violation> out;
    for (const Constraint& c : m.constraints()) {
        double lhs = 0.0;
        for (const auto& [key, coeff] : c.terms) lhs += coeff * p.at(key);
        double residual = 0.0;
        switch (c.sense) {
            case Sense::Le: residual = lhs - c.rhs; break;
            case Sense::Ge: residual = c.rhs - lhs; break;
            case Sense::Eq: residual = std::abs(lhs - c.rhs); break;
        }
        if (residual > tol) out.push_back(Violation{c.id, residual});
    }
    for (const Variable& v : m.variables()) {
        const double x = p.at(v.key);
        if (v.lo - x > tol) out.push_back(Violation{"B-lo[" + v.key.name() + "]", v.lo - x});
        if (x - v.hi > tol) out.push_back(Violation{"B-up[" + v.key.name() + "]", x - v.hi});
    }
    return out;
}

Model relax(const Model& m) {
    ModelBuilder b;
    for (const Variable& v : m.variables()) b.add_variable(v.key, v.lo, v.hi, false);
    for (const Constraint& c : m.constraints()) b.add_constraint(c);
    b.set_objective(m.objective());
    return b.build();
}

}  // namespace hoptree
