#include "pnl/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "pnl/errors.hpp"

namespace pnl {

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < headers.size(); ++i) {
    if (headers[i] == name) return columns[i];
  }
  throw RangeError("csv: no column named '" + name + "'");
}

bool CsvTable::hasColumn(const std::string& name) const {
  for (const auto& h : headers) {
    if (h == name) return true;
  }
  return false;
}

void writeCsv(std::ostream& out, const CsvTable& table) {
  if (table.headers.size() != table.columns.size()) {
    throw PreconditionError("csv: header/column count mismatch");
  }
  for (std::size_t i = 0; i < table.headers.size(); ++i) {
    out << (i ? "," : "") << table.headers[i];
  }
  out << "\n";
  char buf[64];
  const std::size_t n = table.rows();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (table.columns[c].size() != n) {
        throw PreconditionError("csv: ragged columns");
      }
      std::snprintf(buf, sizeof(buf), "%.17g", table.columns[c][r]);
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
}

CsvTable readCsv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw ConstructionError("csv: empty input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.headers.push_back(cell);
  if (table.headers.empty()) {
    throw ConstructionError("csv: empty header row");
  }
  table.columns.assign(table.headers.size(), {});
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      if (c >= table.headers.size()) break;
      try {
        table.columns[c].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConstructionError("csv: bad number at line " +
                                std::to_string(lineno));
      }
      ++c;
    }
    if (c != table.headers.size()) {
      throw ConstructionError("csv: wrong field count at line " +
                              std::to_string(lineno));
    }
  }
  return table;
}

}  // namespace pnl
