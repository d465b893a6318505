#include "billiard/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "billiard/error.hpp"

#ifndef BILLIARD_VERSION
#define BILLIARD_VERSION "0.0.0"
#endif

namespace billiard {

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buffer[17];
  const auto result = std::to_chars(buffer, buffer + 16, value, 16);
  std::string text(buffer, result.ptr);
  return std::string(16 - text.size(), '0') + text;
}

const std::vector<double>& CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return columns[i];
  }
  throw InvalidInput("CSV column not found: " + std::string(name));
}

std::string CsvTable::canonical_text() const {
  std::string text;
  for (const auto& n : names) text += n + ",";
  text += "\n";
  for (std::size_t r = 0; r < rows(); ++r) {
    for (const auto& c : columns) text += format_double(c[r]) + ",";
    text += "\n";
  }
  return text;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? std::string() : field.substr(first, last - first + 1));
  }
  return fields;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_fields(line);
    if (table.names.empty()) {
      table.names = std::move(fields);
      table.columns.resize(table.names.size());
      continue;
    }
    if (fields.size() != table.names.size()) {
      throw InvalidInput(path.string() + ":" + std::to_string(line_number) + ": expected " +
                         std::to_string(table.names.size()) + " fields");
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      double value = 0.0;
      const char* begin = fields[i].data();
      const char* end = begin + fields[i].size();
      const auto result = std::from_chars(begin, end, value);
      if (result.ec != std::errc() || result.ptr != end) {
        throw InvalidInput(path.string() + ":" + std::to_string(line_number) + ": not a number: " + fields[i]);
      }
      table.columns[i].push_back(value);
    }
  }
  if (table.names.empty()) throw InvalidInput(path.string() + ": empty CSV");
  return table;
}

const char* library_version() noexcept { return BILLIARD_VERSION; }

void write_header(std::ostream& out, const OutputHeader& header) {
  out << "# billiard " << library_version() << " config_hash=" << header.config_hash << " units: " << header.units
      << '\n';
  for (const auto& line : header.extra) out << "# " << line << '\n';
}

}  // namespace billiard
