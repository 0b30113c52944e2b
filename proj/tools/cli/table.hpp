#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace hillspec::cli {

/// One output cell. monostate is an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

/// A command's result: fixed column order plus free-form metadata.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

/// Shortest form with 12 significant digits, '.' separator, no locale.
std::string format_number(double value);

/// Metadata as '# key=value' lines, then a header row and one line per row.
void write_csv(std::ostream& out, const Table& table);

/// {"meta": {...}, "columns": [...], "rows": [{column: value, ...}, ...]}
/// with doubles printed to round-trip exactly.
void write_json(std::ostream& out, const Table& table);

/// Inverse of write_json. Throws std::invalid_argument on malformed input.
Table read_json_table(std::string_view text);

}  // namespace hillspec::cli
