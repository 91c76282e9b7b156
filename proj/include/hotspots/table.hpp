#pragma once

// Row-oriented result tables written as CSV (12 significant digits) or as a
// JSON array of objects carrying the same rounded values.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace hotspots::table {

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws DomainError when the row width differs from the header.
  void add(std::vector<Cell> row);
};

enum class Format { kCsv, kJson };

/// %.12g; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

void write_csv(std::ostream& os, const Table& t);
/// Non-finite numbers become null.
void write_json(std::ostream& os, const Table& t);
void write(std::ostream& os, const Table& t, Format f);

}  // namespace hotspots::table
