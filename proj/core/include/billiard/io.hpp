#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace billiard {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

std::uint64_t fnv1a64(std::string_view text) noexcept;
std::string hex64(std::uint64_t value);

/// Numeric CSV: one header row of column names, `#` comment lines ignored.
class CsvTable {
 public:
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(std::string_view name) const;
  std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
  /// Header plus rows re-rendered with `format_double`, for hashing.
  std::string canonical_text() const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Provenance written as the first line of every output file.
struct OutputHeader {
  std::string config_hash;
  std::string units = "k in pi/w; hbar^2/2m = 1; lengths in geometry units";
  std::vector<std::string> extra;
};

const char* library_version() noexcept;

void write_header(std::ostream& out, const OutputHeader& header);

}  // namespace billiard
