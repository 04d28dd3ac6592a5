#include "viscoshock/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "viscoshock/errors.hpp"

namespace viscoshock {

std::string format_real(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_text(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows)
{
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i)
            out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw ValidationError("csv: row has " + std::to_string(row.size()) + " values, header has " +
                                  std::to_string(columns.size()));
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += format_real(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out)
        throw IoError("write failed: " + path.string());
}

void emit_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
              const std::vector<std::vector<double>>& rows)
{
    write_text(path, csv_text(columns, rows));
}

void emit_json(const std::filesystem::path& path, const nlohmann::json& summary)
{
    write_text(path, summary.dump(2) + "\n");
}

void ensure_directory(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::vector<double> parse_csv_row(const std::string& line)
{
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(std::strtod(cell.c_str(), nullptr));
    return out;
}

nlohmann::json json_real(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return x;
}

} // namespace viscoshock
