#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace saari {

/// Named columns of equal length.
struct Series {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;

    std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
    /// Throws DimensionMismatch on unequal column lengths.
    void validate() const;
};

/// Shortest "%.17g" rendering; parses back to the same double.
std::string format_double(double x);

/// Header row plus one line per row, RFC 4180 quoting for names. Throws
/// IoError when the file cannot be written.
void emit_csv(const Series& series, const std::filesystem::path& path);

/// Reads a file written by emit_csv. Throws IoError or ParseError.
Series read_csv(const std::filesystem::path& path);

}  // namespace saari
