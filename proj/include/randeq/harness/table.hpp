#pragma once

// Row-oriented report tables written as CSV or TSV. Integers are emitted
// verbatim; reals with 9 significant digits.

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "randeq/errors.hpp"
#include "randeq/wide_int.hpp"

namespace randeq::harness {

enum class TableFormat { Csv, Tsv };

inline TableFormat parse_format(const std::string& s) {
  if (s == "csv") return TableFormat::Csv;
  if (s == "tsv") return TableFormat::Tsv;
  throw UsageError("unknown format '" + s + "' (expected csv or tsv)");
}

inline std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string fmt_int(Count v) { return to_string(v); }
inline std::string fmt_int(SignedWide v) { return to_string(v); }
inline std::string fmt_int(long long v) { return std::to_string(v); }
inline std::string fmt_int(unsigned long long v) { return std::to_string(v); }
inline std::string fmt_int(long v) { return std::to_string(v); }
inline std::string fmt_int(unsigned long v) { return std::to_string(v); }
inline std::string fmt_int(int v) { return std::to_string(v); }
inline std::string fmt_int(unsigned v) { return std::to_string(v); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != header.size()) throw std::logic_error("table row width does not match header");
    rows.push_back(std::move(row));
  }

  void write(std::ostream& out, TableFormat format = TableFormat::Csv) const {
    const char sep = format == TableFormat::Csv ? ',' : '\t';
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << sep;
        out << cells[i];
      }
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

}  // namespace randeq::harness
