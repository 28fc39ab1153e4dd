#include "msfpop/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace msfpop {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw CsvError(line, "line " + std::to_string(line) + ": not a number: '" + field + "'");
  }
}

}  // namespace

Series parse_series_csv(std::istream& in) {
  Series series;
  std::string raw;
  int line = 0;
  bool saw_weights = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    for (char& c : s)
      if (c == ',' || c == '\t') c = ' ';
    std::istringstream fields(s);
    std::string f1, f2, extra;
    fields >> f1;
    bool has2 = static_cast<bool>(fields >> f2);
    if (fields >> extra) throw CsvError(line, "line " + std::to_string(line) + ": too many fields");
    double y = parse_number(f1, line);
    series.values.push_back(y);
    if (has2) {
      double w = parse_number(f2, line);
      if (!(w > 0.0))
        throw CsvError(line, "line " + std::to_string(line) + ": weight must be > 0");
      if (!saw_weights && series.values.size() > 1)
        throw CsvError(line, "line " + std::to_string(line) + ": weight column appears mid-file");
      saw_weights = true;
      series.weights.push_back(w);
    } else if (saw_weights) {
      throw CsvError(line, "line " + std::to_string(line) + ": missing weight column");
    }
  }
  if (series.values.empty()) throw CsvError(line, "no observations in input");
  series.validate();
  return series;
}

Series read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return parse_series_csv(in);
}

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace msfpop
