#include "sharpstep/emit.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "sharpstep/types.hpp"

namespace sharpstep {
namespace {

nlohmann::json to_json_value(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          // JSON has no spelling for non-finite numbers.
          if (!std::isfinite(v)) return fmt::format("{}", v);
          return v;
        } else {
          return v;
        }
      },
      cell);
}

Cell parse_cell(const std::string& text) {
  std::int64_t integer = 0;
  const char* end = text.data() + text.size();
  if (auto [ptr, ec] = std::from_chars(text.data(), end, integer); ec == std::errc() && ptr == end)
    return integer;
  double real = 0.0;
  if (auto [ptr, ec] = std::from_chars(text.data(), end, real); ec == std::errc() && ptr == end)
    return real;
  return text;
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument(fmt::format("row has {} cells, table has {} columns", row.size(),
                                            columns.size()));
  rows.push_back(std::move(row));
}

Format parse_format(const std::string& tag) {
  if (tag == "csv") return Format::kCsv;
  if (tag == "json") return Format::kJson;
  throw std::invalid_argument("unknown format '" + tag + "'");
}

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return fmt::format("{:.17g}", v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return fmt::format("{}", v);
        } else {
          return v;
        }
      },
      cell);
}

std::string to_csv(const Table& table) {
  std::string out;
  if (!table.meta.empty()) {
    out += "# schedule\n";
    for (const auto& [key, value] : table.meta) out += fmt::format("# {}={}\n", key, format_cell(value));
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json doc;
  doc["schedule"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.meta) doc["schedule"][key] = to_json_value(value);
  doc["records"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json record = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) record[table.columns[c]] = to_json_value(row[c]);
    doc["records"].push_back(std::move(record));
  }
  // dump() prints doubles with max_digits10 = 17 significant digits.
  return doc.dump(1) + "\n";
}

void write_table(const Table& table, Format format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path));
  out << (format == Format::kCsv ? to_csv(table) : to_json(table));
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing {}", path));
}

Table parse_csv(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos)
        table.meta.emplace_back(line.substr(2, eq - 2), parse_cell(line.substr(eq + 1)));
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream row(line);
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (!header) {
      table.columns = std::move(fields);
      header = true;
      continue;
    }
    if (fields.size() != table.columns.size())
      throw FormatError(fmt::format("CSV row has {} fields, header has {}", fields.size(),
                                    table.columns.size()));
    std::vector<Cell> cells;
    cells.reserve(fields.size());
    for (const auto& f : fields) cells.push_back(parse_cell(f));
    table.rows.push_back(std::move(cells));
  }
  if (!header) throw FormatError("CSV has no header row");
  return table;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace sharpstep
