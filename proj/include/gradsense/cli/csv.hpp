#pragma once

// Locale-independent CSV tables. Numbers use the shortest round-trip
// representation, so identical inputs give byte-identical files.

#include <iosfwd>
#include <string>
#include <vector>

namespace gradsense::cli {

std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  void add_row(std::vector<std::string> cells);
  /// Numeric row; NaN is written as an empty cell.
  void add_numbers(const std::vector<double>& values);

  void write(std::ostream& os) const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Quote a cell when it holds a comma, quote or newline.
std::string csv_escape(const std::string& cell);

}  // namespace gradsense::cli
