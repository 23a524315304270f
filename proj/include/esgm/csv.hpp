#ifndef ESGM_CSV_HPP
#define ESGM_CSV_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace esgm::csv {

// Minimal comma-separated reader for the plain schemas used here: no
// quoting, no embedded commas. Strips trailing "\r"; blank lines are
// skipped.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // 1-based file line number of each data row, for error messages.
    std::vector<long> line_numbers;
};

std::vector<std::string> split_line(const std::string& line);

// Throws IoError if the file cannot be opened, SchemaError if the header
// does not match `expected_header` exactly (names the first offending
// column), or if a row has the wrong field count.
Table read_table(const std::filesystem::path& path, const std::vector<std::string>& expected_header);

// Opens for writing, throws IoError on failure.
std::ofstream open_out(const std::filesystem::path& path);

// Joins fields with commas and appends '\n'.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest decimal string that round-trips to the same double.
std::string format_roundtrip(double v);
// Fixed 6 decimal places.
std::string format_fixed6(double v);
// 10 significant digits.
std::string format_sig10(double v);

// Parses a full string as a double; throws std::invalid_argument with
// `context` on malformed or partial input.
double parse_double(const std::string& cell, const std::string& context);
int parse_int(const std::string& cell, const std::string& context);

}  // namespace esgm::csv

#endif  // ESGM_CSV_HPP
