#pragma once

// Minimal RFC-4180 CSV: CRLF records, fields quoted only when needed.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vppart::csv {

using Row = std::vector<std::string>;

std::string escape(std::string_view field);
std::string format_row(const Row& fields);

// Six significant digits, '.' decimal point; NaN becomes an empty field.
std::string real(double v);

// Parses quoted fields, embedded separators and both CRLF and LF records.
// Throws ConfigError on an unterminated quote.
std::vector<Row> parse(std::string_view text);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace vppart::csv
