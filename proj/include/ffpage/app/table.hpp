#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ffpage::app {

using Cell = std::variant<long long, double, std::string, bool>;

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Result table: a commented header block (key: value metadata and column
/// units) followed by plain comma-separated rows.
///
///   # ffpage table
///   # table: curve
///   # seed: 42
///   # units: subsystem_size=modes;entropy=bits
///   subsystem_size,entropy
///   10,9.87
class Table {
 public:
  Table() = default;
  Table(std::string name, std::vector<std::string> columns, std::vector<std::string> units);

  void set_meta(const std::string& key, const std::string& value);
  /// Puts `entries` ahead of the existing metadata (replacing equal keys).
  void prepend_meta(const std::vector<std::pair<std::string, std::string>>& entries);
  [[nodiscard]] std::optional<std::string> meta(const std::string& key) const;
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& metadata() const noexcept {
    return meta_;
  }

  void add_row(const std::vector<Cell>& cells);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
  [[nodiscard]] const std::vector<std::string>& units() const noexcept { return units_; }
  [[nodiscard]] std::size_t row_count() const noexcept { return rows_.size(); }

  /// Throws ValidationError for unknown columns.
  [[nodiscard]] std::size_t column(const std::string& name) const;
  [[nodiscard]] bool has_column(const std::string& name) const;
  [[nodiscard]] const std::string& text(std::size_t row, const std::string& col) const;
  [[nodiscard]] double number(std::size_t row, const std::string& col) const;
  [[nodiscard]] long long integer(std::size_t row, const std::string& col) const;

  [[nodiscard]] std::string serialize() const;
  static Table parse(const std::string& text, const std::string& origin = "<table>");

  friend bool operator==(const Table&, const Table&) = default;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::string> units_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

}  // namespace ffpage::app
