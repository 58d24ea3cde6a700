#ifndef PNL_CSV_HPP
#define PNL_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace pnl {

// Numeric CSV table with a header row. Values are written with 17
// significant digits so doubles round-trip exactly.
struct CsvTable {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
  const std::vector<double>& column(const std::string& name) const;
  bool hasColumn(const std::string& name) const;
};

void writeCsv(std::ostream& out, const CsvTable& table);
CsvTable readCsv(std::istream& in);

}  // namespace pnl

#endif  // PNL_CSV_HPP
