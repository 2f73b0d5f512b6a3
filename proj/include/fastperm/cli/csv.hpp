#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastperm::cli {

/// Malformed input; row and column are 1-based positions in the file.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t row, std::size_t column)
        : std::runtime_error(msg), row_(row), column_(column) {}
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

struct Table {
    char delimiter = ',';
    bool has_header = false;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;  // 1-based file line of each row
};

/// Reads comma- or tab-delimited text. The delimiter is a tab if the first
/// non-empty line contains one. The first line is a header when any of its
/// cells in `numeric_columns` fails to parse as a number.
Table read_table(std::istream& in, std::size_t numeric_columns);

bool parse_real(const std::string& cell, double& out);

/// Two numeric columns (paired tests).
struct PairedData {
    std::vector<double> x;
    std::vector<double> y;
};
PairedData paired_columns(const Table& t);

/// Long format: value column then group label; groups keep first-seen order.
struct LongData {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> groups;
};
LongData long_format(const Table& t);

}  // namespace fastperm::cli
