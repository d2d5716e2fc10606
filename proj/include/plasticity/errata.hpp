#ifndef PLASTICITY_ERRATA_HPP
#define PLASTICITY_ERRATA_HPP

// Line-oriented errata records: confirmed disagreements between a printed
// formula or claim and the independently computed value.
//
//   # id<TAB>parameters<TAB>printed<TAB>engine<TAB>delta<TAB>note
//
// Parameters are "name=value" pairs joined by ';'. Numbers use 17 significant
// digits and the C locale.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "plasticity/errors.hpp"

namespace plasticity {

struct ErratumRecord {
  std::string id;
  std::string parameters;
  double printed = 0.0;
  double engine = 0.0;
  double delta = 0.0;
  std::string note;
};

inline constexpr std::string_view kErrataHeader = "# id\tparameters\tprinted\tengine\tdelta\tnote";

inline std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

inline void write_errata(std::ostream& out, const std::vector<ErratumRecord>& records) {
  out << kErrataHeader << '\n';
  for (const auto& r : records) {
    out << r.id << '\t' << r.parameters << '\t' << format_g17(r.printed) << '\t' << format_g17(r.engine) << '\t'
        << format_g17(r.delta) << '\t' << r.note << '\n';
  }
}

inline std::vector<ErratumRecord> read_errata(std::istream& in) {
  std::vector<ErratumRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() < 5) throw UsageError("errata line " + std::to_string(line_no) + ": expected at least 5 fields");
    ErratumRecord r;
    r.id = fields[0];
    r.parameters = fields[1];
    try {
      r.printed = std::stod(fields[2]);
      r.engine = std::stod(fields[3]);
      r.delta = std::stod(fields[4]);
    } catch (const std::logic_error&) {
      throw UsageError("errata line " + std::to_string(line_no) + ": malformed number");
    }
    if (fields.size() > 5) r.note = fields[5];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace plasticity

#endif  // PLASTICITY_ERRATA_HPP
