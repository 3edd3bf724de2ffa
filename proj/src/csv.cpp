#include "twinrrm/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "twinrrm/errors.hpp"

namespace twinrrm::csv {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw DomainError("csv: row has " + std::to_string(row.size()) + " cells, header has " +
                      std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general);
  std::string s(buf, res.ptr);
  // keep doubles distinguishable from integers on reload
  if (s.find_first_of(".eEn") == std::string::npos) {
    s += ".0";
  }
  return s;
}

namespace {

Cell type_cell(const std::string& s, bool quoted) {
  if (quoted || s.empty()) {
    return s;
  }
  const char* first = s.data();
  const char* last = s.data() + s.size();
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(first, last, i); ec == std::errc() && p == last) {
    return i;
  }
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(first, last, d); ec == std::errc() && p == last) {
    return d;
  }
  return s;
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

std::string render(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    return std::to_string(*i);
  }
  if (const auto* d = std::get_if<double>(&cell)) {
    return format_double(*d);
  }
  const auto& s = std::get<std::string>(cell);
  // numeric-looking text is quoted so it reloads as a string
  if (!std::holds_alternative<std::string>(type_cell(s, false))) {
    return "\"" + s + "\"";
  }
  return quote(s);
}

void write_line(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      out << ',';
    }
    out << fields[i];
  }
  out << '\n';
}

}  // namespace

void write(std::ostream& out, const Table& table) {
  std::vector<std::string> fields;
  fields.reserve(table.columns.size());
  for (const auto& c : table.columns) {
    fields.push_back(quote(c));
  }
  write_line(out, fields);
  for (const auto& row : table.rows) {
    fields.clear();
    for (const auto& cell : row) {
      fields.push_back(render(cell));
    }
    write_line(out, fields);
  }
}

std::string to_string(const Table& table) {
  std::ostringstream out;
  write(out, table);
  return out.str();
}

void emit_csv(const Table& table, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  write(out, table);
  out.flush();
  if (!out) {
    throw Error("write to " + path.string() + " failed");
  }
}

Table parse(const std::string& text) {
  std::vector<std::vector<std::pair<std::string, bool>>> records;
  std::vector<std::pair<std::string, bool>> record;
  std::string field;
  bool quoted = false;
  bool in_quotes = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      in_quotes = true;
      quoted = true;
    } else if (c == ',') {
      record.emplace_back(std::move(field), quoted);
      field.clear();
      quoted = false;
    } else if (c == '\n') {
      record.emplace_back(std::move(field), quoted);
      records.push_back(std::move(record));
      record.clear();
      field.clear();
      quoted = false;
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (in_quotes) {
    throw Error("csv: unterminated quoted field");
  }
  if (any || !field.empty() || !record.empty()) {
    record.emplace_back(std::move(field), quoted);
    records.push_back(std::move(record));
  }

  Table table;
  if (records.empty()) {
    return table;
  }
  for (auto& [name, q] : records.front()) {
    table.columns.push_back(std::move(name));
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    std::vector<Cell> row;
    for (auto& [value, q] : records[r]) {
      row.push_back(type_cell(value, q));
    }
    table.add_row(std::move(row));
  }
  return table;
}

Table load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace twinrrm::csv
