#include <cstdio>
#include <ostream>

#include "atomcollect/cli.hpp"

namespace atomcollect::cli {

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

namespace {

std::string cell_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::json cell_json(const Cell& cell) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(double v) const { return v; }
    nlohmann::json operator()(std::int64_t v) const { return v; }
    nlohmann::json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

void write_csv(const Table& table, const nlohmann::json& metadata, std::ostream& os) {
  for (const auto& [key, value] : metadata.items()) {
    os << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\r\n";
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) os << ',';
    os << csv_escape(table.columns[c]);
  }
  os << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << csv_escape(cell_text(row[c]));
    }
    os << "\r\n";
  }
}

void write_json(const Table& table, const nlohmann::json& metadata, std::ostream& os) {
  nlohmann::json doc;
  doc["metadata"] = metadata;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json record = nlohmann::json::object();
    for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
      record[table.columns[c]] = cell_json(row[c]);
    }
    doc["rows"].push_back(std::move(record));
  }
  os << doc.dump(2) << '\n';
}

}  // namespace atomcollect::cli
