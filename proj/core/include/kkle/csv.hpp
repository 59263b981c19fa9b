#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kkle/linalg.hpp"

namespace kkle {

/// Comma-separated numeric table with a header row of column names.
struct CsvDataset {
  std::vector<std::string> header;
  Matrix data;

  /// Position of a column by name, or by 1-based number when the name is
  /// all digits and not itself a header entry. Throws InvalidInput otherwise.
  Index column_index(const std::string& name) const;
};

/// Parses a dataset. `source` names the input in error messages; row numbers
/// in messages count the header as row 1.
CsvDataset parse_csv(std::istream& in, const std::string& source);
CsvDataset read_csv(const std::string& path);

/// Writes every value with 17 significant digits, so reads are exact.
void write_csv(std::ostream& out, const CsvDataset& dataset);
void write_csv(const std::string& path, const CsvDataset& dataset);

/// Shortest round-trip decimal text for a double.
std::string format_double(double value);

}  // namespace kkle
