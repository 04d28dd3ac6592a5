#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace viscoshock {

/// 17 significant digits: lossless double round trip.
std::string format_real(double x);

/// Header plus one line per row, comma separated, LF endings.
std::string csv_text(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows);

/// Throws ValidationError on a row/header width mismatch and IoError on write failure.
void emit_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
              const std::vector<std::vector<double>>& rows);

/// Keys sorted, two-space indent, trailing newline.
void emit_json(const std::filesystem::path& path, const nlohmann::json& summary);

void write_text(const std::filesystem::path& path, const std::string& text);
void ensure_directory(const std::filesystem::path& dir);

/// Parses one CSV line of reals (the inverse of the row format used by csv_text).
std::vector<double> parse_csv_row(const std::string& line);

/// JSON value for a double; non-finite values become null.
nlohmann::json json_real(double x);

} // namespace viscoshock
