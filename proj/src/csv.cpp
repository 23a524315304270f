#include "esgm/csv.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <system_error>

#include "esgm/errors.hpp"

namespace esgm::csv {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

Table read_table(const std::filesystem::path& path, const std::vector<std::string>& expected_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    Table t;
    std::string line;
    long line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (!have_header) {
            if (fields.size() != expected_header.size()) {
                throw SchemaError("'" + path.string() + "': expected " + std::to_string(expected_header.size()) +
                                  " columns, found " + std::to_string(fields.size()));
            }
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] != expected_header[i]) {
                    throw SchemaError("'" + path.string() + "': column " + std::to_string(i + 1) + " must be '" +
                                      expected_header[i] + "', found '" + fields[i] + "'");
                }
            }
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != expected_header.size()) {
            throw SchemaError("'" + path.string() + "' line " + std::to_string(line_no) + ": expected " +
                              std::to_string(expected_header.size()) + " fields, found " +
                              std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
        t.line_numbers.push_back(line_no);
    }
    if (!have_header) throw SchemaError("'" + path.string() + "': missing header row");
    return t;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << fields[i];
    }
    out << '\n';
}

std::string format_roundtrip(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string format_sig10(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

double parse_double(const std::string& cell, const std::string& context) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw std::invalid_argument(context + ": malformed number '" + cell + "'");
    return v;
}

int parse_int(const std::string& cell, const std::string& context) {
    int v = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw std::invalid_argument(context + ": malformed integer '" + cell + "'");
    return v;
}

}  // namespace esgm::csv
