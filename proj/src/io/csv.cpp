#include "mgrid/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <fmt/core.h>

namespace mgrid::csv {

int Table::column(const std::string& name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

std::vector<double> Table::numbers(const std::string& name) const
{
    const int j = column(name);
    if (j < 0) {
        throw std::runtime_error(fmt::format("csv: missing column '{}'", name));
    }
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!parse_number(rows[i][j], out[i])) {
            throw std::runtime_error(fmt::format("csv line {}, column '{}': '{}' is not a number",
                                                 lines[i], name, rows[i][j]));
        }
    }
    return out;
}

Table read(std::istream& in)
{
    Table t;
    std::vector<std::string> record;
    std::string cell;
    bool in_quotes = false;
    bool quoted = false;
    bool any = false;
    int line = 1;
    int record_line = 1;
    char c;

    auto finish_record = [&] {
        record.push_back(cell);
        cell.clear();
        quoted = false;
        if (t.header.empty()) {
            t.header = std::move(record);
        } else {
            if (record.size() != t.header.size()) {
                throw std::runtime_error(fmt::format("csv line {}: {} fields, header has {}",
                                                     record_line, record.size(), t.header.size()));
            }
            t.rows.push_back(std::move(record));
            t.lines.push_back(record_line);
        }
        record.clear();
        any = false;
    };

    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    cell.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!cell.empty() || quoted) {
                throw std::runtime_error(fmt::format("csv line {}: stray quote", line));
            }
            in_quotes = true;
            quoted = true;
            any = true;
            break;
        case ',':
            record.push_back(cell);
            cell.clear();
            quoted = false;
            any = true;
            break;
        case '\r':
            break;
        case '\n':
            if (any || !cell.empty()) {
                finish_record();
            }
            ++line;
            record_line = line;
            break;
        default:
            if (quoted) {
                throw std::runtime_error(fmt::format("csv line {}: text after closing quote", line));
            }
            cell.push_back(c);
            any = true;
        }
    }
    if (in_quotes) {
        throw std::runtime_error(fmt::format("csv line {}: unterminated quote", record_line));
    }
    if (any || !cell.empty()) {
        finish_record();
    }
    return t;
}

Table read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open '{}'", path));
    }
    return read(in);
}

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (v == 0.0) {
        return "0";
    }
    return fmt::format("{}", v);
}

bool parse_number(const std::string& cell, double& out)
{
    std::string s = cell;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.pop_back();
    }
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) {
        ++start;
    }
    s = s.substr(start);
    if (s.empty()) {
        return false;
    }
    std::string lower = s;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "nan") {
        out = std::nan("");
        return true;
    }
    if (lower == "inf" || lower == "+inf") {
        out = HUGE_VAL;
        return true;
    }
    if (lower == "-inf") {
        out = -HUGE_VAL;
        return true;
    }
    const char* first = s.data();
    if (*first == '+') {
        ++first;
    }
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

Writer& Writer::field(const std::string& s)
{
    if (!first_) {
        os_ << ',';
    }
    first_ = false;
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        os_ << s;
        return *this;
    }
    os_ << '"';
    for (char c : s) {
        if (c == '"') {
            os_ << '"';
        }
        os_ << c;
    }
    os_ << '"';
    return *this;
}

Writer& Writer::field(double v) { return field(format_number(v)); }

Writer& Writer::field(long long v) { return field(std::to_string(v)); }

void Writer::end_row()
{
    os_ << '\n';
    first_ = true;
}

void Writer::row(const std::vector<std::string>& cells)
{
    for (const auto& c : cells) {
        field(c);
    }
    end_row();
}

}  // namespace mgrid::csv
