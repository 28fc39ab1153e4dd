#pragma once

#include <stdexcept>
#include <string>

#include "msfpop/solver.hpp"

namespace msfpop {

// Malformed input line; `line` is 1-based.
struct CsvError : std::runtime_error {
  int line;
  CsvError(int line_, const std::string& what_) : std::runtime_error(what_), line(line_) {}
};

// One observation per line, optional second column with a positive weight.
// Blank lines and lines starting with '#' are skipped. Fields may be
// separated by a comma or by whitespace.
Series read_series_csv(const std::string& path);
Series parse_series_csv(std::istream& in);

// Shortest decimal round-trip formatting, identical across runs.
std::string format_double(double x);

}  // namespace msfpop
