#pragma once

#include <iosfwd>
#include <string>

#include "hoptree/model.hpp"

namespace hoptree {

/// Writes the model in the CPLEX-style LP text format with sections
/// Minimize/Maximize, Subject To, Bounds, Generals, End. Row names are the
/// constraint ids, coefficients carry 17 significant digits, and the Bounds
/// section lists every variable in column order so a reparse reproduces the
/// model coefficient-for-coefficient.
void write_lp(const Model& m, std::ostream& out);
void write_lp_file(const Model& m, const std::string& path);

/// Reader for files produced by write_lp. Variable names must follow the
/// structured naming scheme (x[u,v], l[v,i], g[v,i], y[v,i]).
Model parse_lp(std::istream& in);
Model parse_lp(const std::string& text);
Model parse_lp_file(const std::string& path);

}  // namespace hoptree
