#include "saari/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "saari/core.hpp"

namespace saari {

namespace {

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted CSV field");
    fields.push_back(cur);
    return fields;
}

}  // namespace

void Series::validate() const {
    if (columns.size() != data.size()) throw DimensionMismatch("column names and data disagree");
    for (const auto& col : data)
        if (col.size() != rows()) throw DimensionMismatch("CSV columns have different lengths");
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit_csv(const Series& series, const std::filesystem::path& path) {
    series.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (std::size_t c = 0; c < series.columns.size(); ++c) out << (c ? "," : "") << quote(series.columns[c]);
    out << "\r\n";
    for (std::size_t r = 0; r < series.rows(); ++r) {
        for (std::size_t c = 0; c < series.data.size(); ++c) out << (c ? "," : "") << format_double(series.data[c][r]);
        out << "\r\n";
    }
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

Series read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    Series s;
    s.name = path.stem().string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto fields = split_record(line);
        if (lineno == 1) {
            s.columns = fields;
            s.data.assign(fields.size(), {});
            continue;
        }
        if (line.empty()) continue;
        if (fields.size() != s.columns.size())
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": wrong number of fields");
        for (std::size_t c = 0; c < fields.size(); ++c) {
            char* end = nullptr;
            const double v = std::strtod(fields[c].c_str(), &end);
            if (end == fields[c].c_str() || *end != '\0')
                throw ParseError(path.string() + ":" + std::to_string(lineno) + ": not a number: " + fields[c]);
            s.data[c].push_back(v);
        }
    }
    if (lineno == 0) throw ParseError(path.string() + ": missing header row");
    return s;
}

}  // namespace saari
