#pragma once

#include <string>
#include <vector>

#include "duval/poly.hpp"
#include "duval/series.hpp"

namespace duval::expr {

// Grammar shared by the CLI and the series module: variables x y z t Y Z,
// integer and p/q rational literals, `i` for the imaginary unit, operators
// + - * ^, parentheses; whitespace-insensitive. Parse errors carry the byte
// offset of the offending token.
poly::Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars);

series::TruncSeries parse_series(const std::string& text, const std::vector<std::string>& vars,
                                 int precision);

std::string scalar_to_string(const Scalar& c);
std::string to_string(const poly::Polynomial& p);
std::string to_string(const series::TruncSeries& s);

}  // namespace duval::expr
