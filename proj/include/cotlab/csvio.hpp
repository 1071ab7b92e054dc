#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cotlab {

// 17 significant digits: enough to round-trip any double exactly
std::string fmt17(double x);

// Typed cell so the JSON writer can mirror the CSV field-for-field while
// keeping numbers as numbers.
struct cell {
    enum class kind { text, real, integer, unsigned_integer };
    kind k = kind::text;
    std::string s;
    double d = 0.0;
    std::int64_t i = 0;
    std::uint64_t u = 0;
};

cell cell_text(std::string v);
cell cell_real(double v);
cell cell_int(std::int64_t v);
cell cell_uint(std::uint64_t v);

// Row-oriented table with one header; CSV prints reals at 17 significant
// digits, JSON is a bare array of objects keyed by the header.
class table_writer {
public:
    explicit table_writer(std::vector<std::string> header);

    void add_row(std::vector<cell> cells);  // arity mismatch -> domain_error

    std::string to_csv() const;
    std::string to_json() const;

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<cell>>& rows() const { return rows_; }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<cell>> rows_;
};

struct csv_table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// minimal reader for the tables this tool writes (no quoting, no escapes)
csv_table read_csv(const std::string& path);

} // namespace cotlab
