#include "hoptree/lp_format.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "hoptree/errors.hpp"

namespace hoptree {

namespace {

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_terms(std::ostream& out, const LinearTerms& terms, double constant) {
    bool first = true;
    for (const auto& [key, coeff] : terms) {
        if (first) {
            if (coeff < 0) out << "- ";
            first = false;
        } else {
            out << (coeff < 0 ? " - " : " + ");
        }
        out << num17(std::abs(coeff)) << ' ' << key.name();
    }
    if (constant != 0.0) {
        if (first)
            out << (constant < 0 ? "- " : "") << num17(std::abs(constant));
        else
            out << (constant < 0 ? " - " : " + ") << num17(std::abs(constant));
        first = false;
    }
    if (first) out << "0";
}

}  // namespace

void write_lp(const Model& m, std::ostream& out) {
    out << (m.objective().sense == ObjSense::Max ? "Maximize" : "Minimize") << "\n obj: ";
    write_terms(out, m.objective().terms, m.objective().constant);
    out << "\nSubject To\n";
    for (const Constraint& c : m.constraints()) {
        out << ' ' << c.id << ": ";
        write_terms(out, c.terms, 0.0);
        switch (c.sense) {
            case Sense::Le: out << " <= "; break;
            case Sense::Ge: out << " >= "; break;
            case Sense::Eq: out << " = "; break;
        }
        out << num17(c.rhs) << "\n";
    }
    out << "Bounds\n";
    for (const Variable& v : m.variables())
        out << ' ' << num17(v.lo) << " <= " << v.key.name() << " <= " << num17(v.hi) << "\n";
    bool any_integral = false;
    for (const Variable& v : m.variables()) any_integral |= v.integral;
    if (any_integral) {
        out << "Generals\n";
        for (const Variable& v : m.variables())
            if (v.integral) out << ' ' << v.key.name() << "\n";
    }
    out << "End\n";
}

void write_lp_file(const Model& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_lp(m, out);
    if (!out) throw IoError("write failed for " + path);
}

namespace {

struct LpToken {
    std::string text;
    int line;
};

std::vector<LpToken> tokenize(std::istream& in) {
    std::vector<LpToken> out;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto comment = raw.find('\\');
        if (comment != std::string::npos) raw.erase(comment);
        std::istringstream ss(raw);
        std::string tok;
        while (ss >> tok) out.push_back(LpToken{tok, line_no});
    }
    return out;
}

bool is_number(const std::string& s, double& value) {
    try {
        std::size_t pos = 0;
        value = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

struct ParsedRow {
    std::string id;
    LinearTerms terms;
    double constant = 0.0;
    Sense sense = Sense::Le;
    double rhs = 0.0;
};

class LpParser {
public:
    explicit LpParser(std::vector<LpToken> tokens) : tokens_(std::move(tokens)) {}

    Model parse() {
        if (eof()) throw ParseError(0, "empty LP file");
        std::string section = lower(next().text);
        Objective obj;
        if (section == "maximize" || section == "max")
            obj.sense = ObjSense::Max;
        else if (section == "minimize" || section == "min")
            obj.sense = ObjSense::Min;
        else
            throw ParseError(line_, "expected Minimize or Maximize, got '" + section + "'");

        ParsedRow objective_row = parse_expression(/*want_relation=*/false);
        obj.terms = std::move(objective_row.terms);
        obj.constant = objective_row.constant;

        expect_section("subject");
        if (lower(peek().text) == "to") next();

        std::vector<ParsedRow> rows;
        while (!eof() && lower(peek().text) != "bounds") rows.push_back(parse_expression(true));

        expect_section("bounds");
        struct BoundEntry {
            VarKey key;
            double lo, hi;
        };
        std::vector<BoundEntry> bounds;
        while (!eof() && lower(peek().text) != "generals" && lower(peek().text) != "end") {
            // " lo <= name <= hi"
            double lo = 0.0, hi = 0.0;
            const LpToken lo_tok = next();
            if (!is_number(lo_tok.text, lo)) throw ParseError(lo_tok.line, "expected lower bound");
            expect_token("<=");
            const LpToken name = next();
            const auto key = VarKey::parse(name.text);
            if (!key) throw ParseError(name.line, "unrecognized variable name " + name.text);
            expect_token("<=");
            const LpToken hi_tok = next();
            if (!is_number(hi_tok.text, hi)) throw ParseError(hi_tok.line, "expected upper bound");
            bounds.push_back(BoundEntry{*key, lo, hi});
        }

        std::map<VarKey, bool> integral;
        if (!eof() && lower(peek().text) == "generals") {
            next();
            while (!eof() && lower(peek().text) != "end") {
                const LpToken name = next();
                const auto key = VarKey::parse(name.text);
                if (!key) throw ParseError(name.line, "unrecognized variable name " + name.text);
                integral[*key] = true;
            }
        }
        expect_section("end");

        ModelBuilder b;
        for (const BoundEntry& e : bounds)
            b.add_variable(e.key, e.lo, e.hi, integral.count(e.key) != 0);
        for (ParsedRow& row : rows) {
            if (row.constant != 0.0) {
                // fold a stray constant into the rhs
                row.rhs -= row.constant;
            }
            b.add_constraint(Constraint{std::move(row.id), std::move(row.terms), row.sense, row.rhs});
        }
        b.set_objective(std::move(obj));
        return b.build();
    }

private:
    std::vector<LpToken> tokens_;
    std::size_t pos_ = 0;
    int line_ = 1;

    bool eof() const { return pos_ >= tokens_.size(); }
    const LpToken& peek() const {
        if (pos_ >= tokens_.size()) throw ParseError(line_, "unexpected end of LP file");
        return tokens_[pos_];
    }
    LpToken next() {
        const LpToken& t = peek();
        line_ = t.line;
        ++pos_;
        return t;
    }
    static std::string lower(std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    }
    void expect_section(const std::string& word) {
        if (eof() || lower(peek().text) != word)
            throw ParseError(eof() ? line_ : peek().line, "expected section '" + word + "'");
        next();
    }
    void expect_token(const std::string& text) {
        const LpToken t = next();
        if (t.text != text) throw ParseError(t.line, "expected '" + text + "', got '" + t.text + "'");
    }

    // "name: [sign] [coeff] var ... [sense rhs]". The row name is mandatory
    // for constraints ("want_relation"); the objective row is "obj:".
    ParsedRow parse_expression(bool want_relation) {
        ParsedRow row;
        LpToken head = next();
        if (head.text.back() == ':') {
            row.id = head.text.substr(0, head.text.size() - 1);
        } else {
            throw ParseError(head.line, "expected a row name ending in ':', got '" + head.text + "'");
        }
        double sign = 1.0;
        bool have_coeff = false;
        double coeff = 1.0;
        while (!eof()) {
            const std::string& t = peek().text;
            if (t == "<=" || t == ">=" || t == "=") {
                if (!want_relation) break;
                const LpToken rel = next();
                row.sense = rel.text == "<=" ? Sense::Le : rel.text == ">=" ? Sense::Ge : Sense::Eq;
                const LpToken rhs = next();
                double v = 0.0;
                if (!is_number(rhs.text, v)) throw ParseError(rhs.line, "expected rhs number");
                row.rhs = v;
                return row;
            }
            if (t == "+") {
                next();
                sign = 1.0;
                continue;
            }
            if (t == "-") {
                next();
                sign = -1.0;
                continue;
            }
            double v = 0.0;
            if (is_number(t, v)) {
                if (have_coeff) {  // previous number had no variable: constant
                    row.constant += coeff;
                }
                next();
                coeff = sign * v;
                have_coeff = true;
                sign = 1.0;
                continue;
            }
            const auto key = VarKey::parse(t);
            if (key) {
                next();
                row.terms.emplace_back(*key, have_coeff ? coeff : sign);
                have_coeff = false;
                coeff = 1.0;
                sign = 1.0;
                continue;
            }
            break;  // next section keyword
        }
        if (have_coeff) row.constant += coeff;
        if (want_relation) throw ParseError(line_, "constraint row " + row.id + " has no relation");
        return row;
    }
};

}  // namespace

Model parse_lp(std::istream& in) { return LpParser(tokenize(in)).parse(); }

Model parse_lp(const std::string& text) {
    std::istringstream ss(text);
    return parse_lp(ss);
}

Model parse_lp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return parse_lp(in);
}

}  // namespace hoptree
