#include "table.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hillspec::cli {

using nlohmann::ordered_json;

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, r.ptr);
}

namespace {

std::string csv_field(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string quoted = "\"";
      for (char c : v) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + '"';
    }
  };
  return std::visit(Visitor{}, cell);
}

ordered_json to_json(const Cell& cell) {
  struct Visitor {
    ordered_json operator()(std::monostate) const { return nullptr; }
    // JSON has no inf/nan; those become null.
    ordered_json operator()(double v) const {
      return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
    }
    ordered_json operator()(std::int64_t v) const { return v; }
    ordered_json operator()(bool v) const { return v; }
    ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

Cell from_json(const ordered_json& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw std::invalid_argument("unsupported cell type in JSON table");
}

std::string meta_value(const ordered_json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_float()) return format_number(j.get<double>());
  return j.dump();
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& [key, value] : table.meta.items()) {
    out << "# " << key << '=' << meta_value(value) << '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  ordered_json doc;
  doc["meta"] = table.meta;
  doc["columns"] = table.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      obj[table.columns[i]] = to_json(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

Table read_json_table(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw std::invalid_argument(std::string("JSON table: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("columns") || !doc.contains("rows")) {
    throw std::invalid_argument("JSON table: expected 'columns' and 'rows'");
  }
  Table t;
  try {
    t.columns = doc.at("columns").get<std::vector<std::string>>();
    if (doc.contains("meta")) t.meta = doc.at("meta");
    for (const auto& obj : doc.at("rows")) {
      std::vector<Cell> row;
      row.reserve(t.columns.size());
      for (const auto& c : t.columns) {
        row.push_back(obj.contains(c) ? from_json(obj.at(c)) : Cell{});
      }
      t.rows.push_back(std::move(row));
    }
  } catch (const ordered_json::exception& e) {
    throw std::invalid_argument(std::string("JSON table: ") + e.what());
  }
  return t;
}

}  // namespace hillspec::cli
