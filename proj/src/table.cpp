#include "sbp/table.hpp"

#include "sbp/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace sbp {

void Table::add_row(std::vector<Cell> row)
{
    if (row.size() != columns.size())
        throw SizeError("Table::add_row: " + std::to_string(row.size()) + " cells for " +
                        std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

namespace {

std::string format_cell(const Cell& c, int precision, bool exact)
{
    if (c.is_text())
        return c.text;
    if (std::isnan(c.value))
        return "---";
    char buf[64];
    if (exact)
        std::snprintf(buf, sizeof buf, "%.17g", c.value);
    else if (precision < 0)
        std::snprintf(buf, sizeof buf, "%.0f", c.value);
    else
        std::snprintf(buf, sizeof buf, "%.*f", precision, c.value);
    return buf;
}

} // namespace

std::string emit_table(const Table& t, TableFormat format)
{
    if (t.rows.empty())
        throw ParameterError("emit_table: no rows");
    std::ostringstream os;
    const size_t nc = t.columns.size();
    if (format == TableFormat::csv) {
        for (size_t c = 0; c < nc; ++c)
            os << t.columns[c].name << (c + 1 < nc ? "," : "\n");
        for (const auto& r : t.rows)
            for (size_t c = 0; c < nc; ++c)
                os << format_cell(r[c], t.columns[c].precision, t.columns[c].precision >= 0)
                   << (c + 1 < nc ? "," : "\n");
        return os.str();
    }
    std::vector<std::vector<std::string>> cells;
    std::vector<size_t> width(nc);
    for (size_t c = 0; c < nc; ++c)
        width[c] = t.columns[c].name.size();
    for (const auto& r : t.rows) {
        std::vector<std::string> line;
        for (size_t c = 0; c < nc; ++c) {
            line.push_back(format_cell(r[c], t.columns[c].precision, false));
            width[c] = std::max(width[c], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    auto put = [&](size_t c, const std::string& s) {
        os << std::string(width[c] - s.size(), ' ') << s << (c + 1 < nc ? "  " : "\n");
    };
    for (size_t c = 0; c < nc; ++c)
        put(c, t.columns[c].name);
    for (const auto& line : cells)
        for (size_t c = 0; c < nc; ++c)
            put(c, line[c]);
    return os.str();
}

void write_table(const Table& t, TableFormat format, const std::string& path)
{
    std::ofstream os(path);
    os << emit_table(t, format);
    if (!os)
        throw Error("write_table: cannot write " + path);
}

Table parse_csv_table(const std::string& csv)
{
    std::istringstream is(csv);
    std::string line;
    auto split = [](const std::string& l) {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : l) {
            if (ch == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur += ch;
            }
        }
        out.push_back(cur);
        return out;
    };
    Table t;
    if (!std::getline(is, line))
        throw ParseError("parse_csv_table: empty input");
    for (auto& name : split(line))
        t.columns.push_back({name, 17});
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        auto fields = split(line);
        if (fields.size() != t.columns.size())
            throw ParseError("parse_csv_table: line " + std::to_string(lineno) + " has " +
                             std::to_string(fields.size()) + " fields");
        std::vector<Cell> row;
        for (const auto& f : fields) {
            Cell cell;
            if (f == "---") {
                cell.value = std::numeric_limits<double>::quiet_NaN();
            } else {
                double v = 0.0;
                auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
                if (ec == std::errc() && p == f.data() + f.size())
                    cell.value = v;
                else
                    cell.text = f;
            }
            row.push_back(cell);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace sbp
