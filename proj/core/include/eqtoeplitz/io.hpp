#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eqtoeplitz/common.hpp"

namespace eqt::io {

/// Shortest text that reads back to the same double ("%.17g").
std::string format_double(double x);

/// RFC-4180 quoting when the field contains a comma, quote or newline.
std::string csv_field(const std::string& s);
std::string csv_line(const std::vector<std::string>& fields);

/// Creates parent directories as needed.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// $EQT_OUTPUT_DIR if set, else "eqt-results".
std::filesystem::path default_output_dir();

/// 1-based line and column of a byte offset, for config diagnostics.
std::pair<int, int> line_column(const std::string& text, std::size_t offset);

}  // namespace eqt::io
