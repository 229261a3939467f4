#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mgrid::csv {

/// RFC 4180 table: first record is the header.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// 1-based source line of each row, for diagnostics
    std::vector<int> lines;

    /// Index of a header name, -1 if absent.
    int column(const std::string& name) const;
    /// Column parsed as doubles; throws std::runtime_error naming line and column.
    std::vector<double> numbers(const std::string& name) const;
};

/// Quoted fields may hold commas, doubled quotes and newlines. CRLF is accepted.
/// Throws std::runtime_error on unterminated quotes or ragged rows.
Table read(std::istream& in);
Table read_file(const std::string& path);

/// Shortest text that parses back to the same double; "nan", "inf", "-inf".
std::string format_number(double v);
/// Strict parse of a whole cell; accepts "nan" and "inf" in any case.
bool parse_number(const std::string& cell, double& out);

class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    Writer& field(const std::string& s);
    Writer& field(double v);
    Writer& field(long long v);
    Writer& field(int v) { return field(static_cast<long long>(v)); }
    void end_row();
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& os_;
    bool first_ = true;
};

}  // namespace mgrid::csv
