#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace twinrrm::csv {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws DomainError if the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

/// Shortest decimal that round-trips, at most 17 significant digits.
std::string format_double(double value);

/// RFC 4180 fields, header first, LF line endings.
void write(std::ostream& out, const Table& table);
std::string to_string(const Table& table);

/// Writes to `path`, creating parent directories. Throws Error on I/O failure.
void emit_csv(const Table& table, const std::filesystem::path& path);

/// Parses text produced by write(). Cells that parse fully as integers or
/// doubles come back typed; everything else stays a string.
Table parse(const std::string& text);
Table load_csv(const std::filesystem::path& path);

}  // namespace twinrrm::csv
