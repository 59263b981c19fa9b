#include "kkle/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kkle/error.hpp"

namespace kkle {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string_view rest(line);
  while (true) {
    const auto comma = rest.find(',');
    cells.push_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return cells;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

Index CsvDataset::column_index(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it != header.end()) return static_cast<Index>(it - header.begin());
  if (!name.empty() && std::all_of(name.begin(), name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const long k = std::stol(name);
    if (k >= 1 && k <= static_cast<long>(header.size())) return static_cast<Index>(k - 1);
  }
  throw InvalidInput("unknown column '" + name + "'");
}

CsvDataset parse_csv(std::istream& in, const std::string& source) {
  CsvDataset ds;
  std::string line;
  std::size_t row = 0;
  bool have_header = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (is_blank(line)) continue;
    auto cells = split_line(line);
    if (!have_header) {
      for (const auto& c : cells) {
        if (c.empty()) throw InvalidInput(source + ": empty column name in header (row " + std::to_string(row) + ")");
      }
      ds.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != ds.header.size()) {
      throw InvalidInput(source + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                         " cells, header has " + std::to_string(ds.header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_number(cells[c], v)) {
        throw InvalidInput(source + ": row " + std::to_string(row) + ", column '" + ds.header[c] +
                           "': not a finite number: '" + cells[c] + "'");
      }
      values.push_back(v);
    }
  }
  if (in.bad()) throw InvalidInput(source + ": read error");
  if (!have_header) throw InvalidInput(source + ": empty file (no header row)");
  const auto cols = static_cast<Index>(ds.header.size());
  const auto rows = static_cast<Index>(values.size()) / cols;
  ds.data = Eigen::Map<const Matrix>(values.data(), rows, cols);
  return ds;
}

CsvDataset read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(path + ": cannot open file");
  return parse_csv(in, path);
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const CsvDataset& dataset) {
  if (static_cast<Index>(dataset.header.size()) != dataset.data.cols()) {
    throw InvalidInput("csv header has " + std::to_string(dataset.header.size()) + " names for " +
                       std::to_string(dataset.data.cols()) + " columns");
  }
  for (std::size_t c = 0; c < dataset.header.size(); ++c) {
    out << (c ? "," : "") << dataset.header[c];
  }
  out << '\n';
  char buf[32];
  for (Index r = 0; r < dataset.data.rows(); ++r) {
    for (Index c = 0; c < dataset.data.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", dataset.data(r, c));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_csv(const std::string& path, const CsvDataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput(path + ": cannot open for writing");
  write_csv(out, dataset);
  if (!out) throw InvalidInput(path + ": write failed");
}

}  // namespace kkle
