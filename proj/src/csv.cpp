#include "polyloc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace polyloc {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string encode_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string value_to_string(const CsvValue& v) {
    if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    if (std::holds_alternative<double>(v)) return format_double(std::get<double>(v));
    return std::to_string(std::get<long long>(v));
}

}  // namespace

std::string csv_to_string(const CsvTable& table) {
    std::string out;
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ",";
        out += encode_field(table.header[i]);
    }
    out += "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::invalid_argument("csv_to_string: row width differs from header");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += encode_field(value_to_string(row[i]));
        }
        out += "\n";
    }
    return out;
}

void write_csv(const CsvTable& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_csv: cannot open " + path);
    f << csv_to_string(table);
    if (!f) throw std::runtime_error("write_csv: write failed for " + path);
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool row_open = false;
    auto end_field = [&]() {
        fields.push_back(cur);
        cur.clear();
        row_open = true;
    };
    auto end_row = [&]() {
        if (!row_open && fields.empty()) return;
        end_field();
        if (table.header.empty()) {
            table.header = fields;
        } else {
            std::vector<CsvValue> row;
            row.reserve(fields.size());
            for (auto& f : fields) row.emplace_back(std::move(f));
            table.rows.push_back(std::move(row));
        }
        fields.clear();
        row_open = false;
    };
    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
            continue;
        }
        if (c == '"' && cur.empty()) {
            quoted = true;
            row_open = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_row();
        } else if (c != '\r') {
            cur += c;
            row_open = true;
        }
    }
    if (row_open || !cur.empty() || !fields.empty()) end_row();
    return table;
}

}  // namespace polyloc
