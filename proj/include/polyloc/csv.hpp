#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace polyloc {

using CsvValue = std::variant<std::string, double, long long>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvValue>> rows;
};

// number formatting used everywhere a double becomes text: 17 significant
// digits, enough for bit-exact round trips
std::string format_double(double v);

// RFC-4180 body: comma separators, CRLF-free LF line ends, minimal quoting
// (fields containing comma, quote, or newline), quotes doubled
std::string csv_to_string(const CsvTable& table);
void write_csv(const CsvTable& table, const std::string& path);

// strict parser for the writer's own output (tests, round-trips)
CsvTable parse_csv(const std::string& text);

}  // namespace polyloc
