#pragma once

// Minimal CSV tables. Cells are kept as text; doubles are written with 17
// significant digits so that every value survives a round trip bit-exactly.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "xyqd/errors.hpp"

namespace xyqd::csv {

using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;

    bool operator==(const Table&) const = default;

    std::size_t column(const std::string& name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw ValidationError("no column '" + name + "'");
    }

    double number(std::size_t row, const std::string& name) const;
};

inline std::string format(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format(long long v) { return std::to_string(v); }
inline std::string format(int v) { return std::to_string(v); }

inline double parse_double(const std::string& s)
{
    if (s == "nan")
        return std::nan("");
    if (s == "inf")
        return INFINITY;
    if (s == "-inf")
        return -INFINITY;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ValidationError("not a number: '" + s + "'");
    }
    if (pos != s.size())
        throw ValidationError("not a number: '" + s + "'");
    return v;
}

inline double Table::number(std::size_t row, const std::string& name) const
{
    return parse_double(rows.at(row).at(column(name)));
}

inline std::string quote(const std::string& cell)
{
    if (cell.find_first_of(",\"\n\r") == std::string::npos)
        return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

inline void write_row(std::ostream& os, const Row& row)
{
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i)
            os << ',';
        os << quote(row[i]);
    }
    os << '\n';
}

inline void write(std::ostream& os, const Table& t)
{
    write_row(os, t.header);
    for (const auto& r : t.rows)
        write_row(os, r);
}

inline std::string emit(const Table& t)
{
    std::ostringstream os;
    write(os, t);
    return os.str();
}

/// Parses RFC 4180 style text (quoted cells may contain commas, quotes, newlines).
inline Table parse(const std::string& text)
{
    std::vector<Row> rows;
    Row row;
    std::string cell;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(cell));
            cell.clear();
        } else if (c == '\n') {
            row.push_back(std::move(cell));
            cell.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else if (c != '\r') {
            cell += c;
        }
    }
    if (quoted)
        throw ValidationError("unterminated quoted CSV cell");
    if (any) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    Table t;
    if (rows.empty())
        return t;
    t.header = std::move(rows.front());
    t.rows.assign(std::make_move_iterator(rows.begin() + 1), std::make_move_iterator(rows.end()));
    for (const auto& r : t.rows)
        if (r.size() != t.header.size())
            throw ValidationError("CSV row width differs from header");
    return t;
}

inline Table read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

inline void write_file(const std::string& path, const Table& t)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write '" + path + "'");
    write(out, t);
}

} // namespace xyqd::csv
