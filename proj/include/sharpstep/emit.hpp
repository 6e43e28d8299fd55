#pragma once

// Tabular results with a metadata block, written as CSV (metadata as
// leading "# key=value" comment lines) or JSON ({"schedule": {...},
// "records": [...]}).  Doubles are written with 17 significant digits so
// they round-trip exactly.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sharpstep {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> meta;

  void add_row(std::vector<Cell> row);
};

enum class Format { kCsv, kJson };

Format parse_format(const std::string& tag);

std::string format_cell(const Cell& cell);
std::string to_csv(const Table& table);
std::string to_json(const Table& table);

// Throws IoError when the file cannot be written.
void write_table(const Table& table, Format format, const std::string& path);

// Parses a CSV produced by to_csv: metadata comments, header, then rows.
// Cells are returned as integers, doubles or strings by their spelling.
Table read_csv(const std::string& path);
Table parse_csv(const std::string& text);

}  // namespace sharpstep
