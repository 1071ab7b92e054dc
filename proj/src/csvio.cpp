#include "cotlab/csvio.hpp"

#include "cotlab/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace cotlab {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

cell cell_text(std::string v) {
    cell c;
    c.k = cell::kind::text;
    c.s = std::move(v);
    return c;
}

cell cell_real(double v) {
    cell c;
    c.k = cell::kind::real;
    c.d = v;
    return c;
}

cell cell_int(std::int64_t v) {
    cell c;
    c.k = cell::kind::integer;
    c.i = v;
    return c;
}

cell cell_uint(std::uint64_t v) {
    cell c;
    c.k = cell::kind::unsigned_integer;
    c.u = v;
    return c;
}

table_writer::table_writer(std::vector<std::string> header)
    : header_(std::move(header)) {
    if (header_.empty()) throw domain_error("table_writer: empty header");
}

void table_writer::add_row(std::vector<cell> cells) {
    if (cells.size() != header_.size())
        throw domain_error("table_writer: row arity does not match header");
    rows_.push_back(std::move(cells));
}

namespace {

std::string cell_to_csv(const cell& c) {
    switch (c.k) {
        case cell::kind::text: return c.s;
        case cell::kind::real: return fmt17(c.d);
        case cell::kind::integer: return std::to_string(c.i);
        default: return std::to_string(c.u);
    }
}

} // namespace

std::string table_writer::to_csv() const {
    std::ostringstream out;
    for (std::size_t j = 0; j < header_.size(); ++j) {
        if (j) out << ',';
        out << header_[j];
    }
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            out << cell_to_csv(row[j]);
        }
        out << '\n';
    }
    return out.str();
}

std::string table_writer::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t j = 0; j < row.size(); ++j) {
            const cell& c = row[j];
            switch (c.k) {
                case cell::kind::text: obj[header_[j]] = c.s; break;
                case cell::kind::real: obj[header_[j]] = c.d; break;
                case cell::kind::integer: obj[header_[j]] = c.i; break;
                default: obj[header_[j]] = c.u; break;
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

csv_table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("read_csv: cannot open '" + path + "'");
    csv_table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(pos));
                break;
            }
            cells.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

} // namespace cotlab
