#pragma once

#include <string>
#include <vector>

namespace monotone {

/// Shortest decimal text that parses back to exactly v ("nan", "inf", "-inf" for non-finite).
std::string format_double(double v);

/// Strict parse of a whole string as a double; throws ParseError naming `what`.
double parse_double(const std::string& s, const std::string& what);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

}  // namespace monotone
