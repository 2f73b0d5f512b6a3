#include "fastperm/cli/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace fastperm::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        cells.push_back(trim(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return cells;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

double cell_value(const Table& t, std::size_t row, std::size_t col) {
    const std::size_t line = t.row_lines[row];
    if (col >= t.rows[row].size()) {
        throw ParseError("missing cell at row " + std::to_string(line) + ", column " + std::to_string(col + 1), line,
                         col + 1);
    }
    double x = 0.0;
    if (!parse_real(t.rows[row][col], x)) {
        throw ParseError("non-numeric cell '" + t.rows[row][col] + "' at row " + std::to_string(line) +
                             ", column " + std::to_string(col + 1),
                         line, col + 1);
    }
    return x;
}

}  // namespace

bool parse_real(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first != last && std::isspace(static_cast<unsigned char>(*first))) ++first;
    while (last != first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
    if (first == last) return false;
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

Table read_table(std::istream& in, std::size_t numeric_columns) {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        if (first) {
            first = false;
            t.delimiter = (line.find('\t') != std::string::npos) ? '\t' : ',';
            auto cells = split(line, t.delimiter);
            double dummy = 0.0;
            for (std::size_t c = 0; c < std::min(numeric_columns, cells.size()); ++c) {
                if (!parse_real(cells[c], dummy)) t.has_header = true;
            }
            if (t.has_header) {
                t.header = std::move(cells);
                continue;
            }
            t.rows.push_back(std::move(cells));
            t.row_lines.push_back(lineno);
            continue;
        }
        t.rows.push_back(split(line, t.delimiter));
        t.row_lines.push_back(lineno);
    }
    if (t.rows.empty()) throw ParseError("no data rows", lineno, 1);
    return t;
}

PairedData paired_columns(const Table& t) {
    PairedData d;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        d.x.push_back(cell_value(t, r, 0));
        d.y.push_back(cell_value(t, r, 1));
    }
    return d;
}

LongData long_format(const Table& t) {
    LongData d;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double value = cell_value(t, r, 0);
        if (t.rows[r].size() < 2 || t.rows[r][1].empty()) {
            const std::size_t line = t.row_lines[r];
            throw ParseError("missing group label at row " + std::to_string(line) + ", column 2", line, 2);
        }
        const std::string& label = t.rows[r][1];
        auto it = std::find(d.labels.begin(), d.labels.end(), label);
        if (it == d.labels.end()) {
            d.labels.push_back(label);
            d.groups.emplace_back();
            it = d.labels.end() - 1;
        }
        d.groups[static_cast<std::size_t>(it - d.labels.begin())].push_back(value);
    }
    return d;
}

}  // namespace fastperm::cli
