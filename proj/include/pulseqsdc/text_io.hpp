#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pulseqsdc::io {

/// Shortest decimal with 17 significant digits ("%.17g" semantics, locale-free).
std::string format_double(double v);

/// Writes to a sibling temp file, then renames over `path`.
/// Throws std::invalid_argument naming the directory if it does not exist.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Splits CSV text into rows of fields. Expects `header` as the first line.
std::vector<std::vector<std::string>> read_csv_rows(std::string_view text, std::string_view header);

double parse_double(std::string_view field);

}  // namespace pulseqsdc::io
