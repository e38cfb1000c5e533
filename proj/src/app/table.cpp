#include "ffpage/app/table.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ffpage/error.hpp"

namespace ffpage::app {
namespace {

constexpr std::string_view kMagic = "# ffpage table";

void check_field(const std::string& s, const char* what) {
  if (s.find_first_of(",\n\r") != std::string::npos) {
    throw ValidationError(std::string(what) + " '" + s + "' contains a comma or newline");
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string current;
  for (char c : line) {
    if (c == sep) {
      out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  out.push_back(std::move(current));
  return out;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw NumericalError("cannot format double");
  return std::string(buf.data(), end);
}

Table::Table(std::string name, std::vector<std::string> columns, std::vector<std::string> units)
    : name_(std::move(name)), columns_(std::move(columns)), units_(std::move(units)) {
  detail::require(!columns_.empty(), "table needs at least one column");
  detail::require(units_.size() == columns_.size(), "table needs one unit per column");
  check_field(name_, "table name");
  for (const auto& c : columns_) {
    check_field(c, "column name");
    detail::require(c.find_first_of("=;") == std::string::npos && !c.empty(),
                    "column names must be non-empty without '=' or ';'");
  }
  for (const auto& u : units_) {
    check_field(u, "unit");
    detail::require(u.find(';') == std::string::npos, "units must not contain ';'");
  }
}

void Table::set_meta(const std::string& key, const std::string& value) {
  detail::require(!key.empty() && key.find(": ") == std::string::npos &&
                      key.find('\n') == std::string::npos,
                  "invalid metadata key '" + key + "'");
  detail::require(value.find('\n') == std::string::npos, "metadata values must be single-line");
  detail::require(key != "units" && key != "table", "reserved metadata key '" + key + "'");
  for (auto& [k, v] : meta_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  meta_.emplace_back(key, value);
}

void Table::prepend_meta(const std::vector<std::pair<std::string, std::string>>& entries) {
  auto rest = std::move(meta_);
  meta_.clear();
  for (const auto& [k, v] : entries) set_meta(k, v);
  for (const auto& [k, v] : rest) {
    if (!meta(k)) meta_.emplace_back(k, v);
  }
}

std::optional<std::string> Table::meta(const std::string& key) const {
  for (const auto& [k, v] : meta_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void Table::add_row(const std::vector<Cell>& cells) {
  detail::require(cells.size() == columns_.size(), "row width does not match the columns");
  std::vector<std::string> row;
  row.reserve(cells.size());
  for (const auto& cell : cells) {
    std::string s = std::visit(
        [](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            return format_double(v);
          } else if constexpr (std::is_same_v<T, bool>) {
            return v ? "true" : "false";
          } else if constexpr (std::is_same_v<T, long long>) {
            return std::to_string(v);
          } else {
            return v;
          }
        },
        cell);
    check_field(s, "cell");
    row.push_back(std::move(s));
  }
  rows_.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw ValidationError("table '" + name_ + "' has no column '" + name + "'");
}

bool Table::has_column(const std::string& name) const {
  for (const auto& c : columns_) {
    if (c == name) return true;
  }
  return false;
}

const std::string& Table::text(std::size_t row, const std::string& col) const {
  detail::require(row < rows_.size(), "row index out of range");
  return rows_[row][column(col)];
}

double Table::number(std::size_t row, const std::string& col) const {
  const std::string& s = text(row, col);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ValidationError("column '" + col + "' row " + std::to_string(row) + ": '" + s +
                          "' is not a number");
  }
  return v;
}

long long Table::integer(std::size_t row, const std::string& col) const {
  const std::string& s = text(row, col);
  long long v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ValidationError("column '" + col + "' row " + std::to_string(row) + ": '" + s +
                          "' is not an integer");
  }
  return v;
}

std::string Table::serialize() const {
  std::string out;
  out += kMagic;
  out += "\n# table: " + name_ + "\n";
  for (const auto& [k, v] : meta_) out += "# " + k + ": " + v + "\n";
  out += "# units: ";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i > 0) out += ";";
    out += columns_[i] + "=" + units_[i];
  }
  out += "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i > 0) out += ",";
    out += columns_[i];
  }
  out += "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ",";
      out += row[i];
    }
    out += "\n";
  }
  return out;
}

Table Table::parse(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ValidationError(origin + ":" + std::to_string(line_no) + ": " + what);
  };

  Table t;
  ++line_no;
  if (!std::getline(in, line) || line != kMagic) fail("not an ffpage table (missing magic line)");
  bool have_units = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# ", 0) != 0) break;
    const std::string body = line.substr(2);
    const auto sep = body.find(": ");
    if (sep == std::string::npos) fail("malformed header line");
    const std::string key = body.substr(0, sep);
    const std::string value = body.substr(sep + 2);
    if (key == "table") {
      t.name_ = value;
    } else if (key == "units") {
      for (const auto& item : split(value, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) fail("malformed units entry '" + item + "'");
        t.units_.push_back(item.substr(eq + 1));
      }
      have_units = true;
    } else {
      t.meta_.emplace_back(key, value);
    }
  }
  if (!have_units) fail("missing units header");
  if (line.empty() || line.rfind("# ", 0) == 0) fail("missing column header");
  t.columns_ = split(line, ',');
  if (t.columns_.size() != t.units_.size()) fail("units and columns differ in count");
  while (std::getline(in, line)) {
    ++line_no;
    auto cells = split(line, ',');
    if (cells.size() != t.columns_.size()) fail("row has the wrong number of cells");
    t.rows_.push_back(std::move(cells));
  }
  return t;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ValidationError("write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace ffpage::app
