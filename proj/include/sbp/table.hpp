#pragma once

#include <string>
#include <vector>

namespace sbp {

struct Cell {
    double value = 0.0;
    std::string text;   // used instead of value when non-empty
    bool is_text() const { return !text.empty(); }
};

struct Column {
    std::string name;
    int precision = 2;   // digits after the point in aligned text; < 0 prints integers
};

struct Table {
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

enum class TableFormat { csv, aligned };

// NaN renders as "---". CSV keeps 17 significant digits so values round-trip.
std::string emit_table(const Table& t, TableFormat format);
void write_table(const Table& t, TableFormat format, const std::string& path);

// Inverse of the CSV form; cells that do not parse as numbers stay text.
Table parse_csv_table(const std::string& csv);

} // namespace sbp
