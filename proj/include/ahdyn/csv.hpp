#pragma once

// Locale-independent CSV output: header row, comma separator, shortest
// round-trip decimal representation of every double.

#include <charconv>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ahdyn::csv {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) throw std::runtime_error("csv: number formatting failed");
    return std::string(buf, res.ptr);
}

inline void write_columns(std::ostream& os, std::initializer_list<std::string_view> header,
                          std::initializer_list<std::span<const double>> columns) {
    if (header.size() != columns.size()) throw std::invalid_argument("csv: header/column mismatch");
    std::size_t rows = 0;
    bool first = true;
    for (const auto& c : columns) {
        if (first) rows = c.size();
        else if (c.size() != rows) throw std::invalid_argument("csv: ragged columns");
        first = false;
    }
    std::string line;
    for (auto it = header.begin(); it != header.end(); ++it) {
        if (it != header.begin()) line += ',';
        line += *it;
    }
    line += '\n';
    os << line;
    for (std::size_t r = 0; r < rows; ++r) {
        line.clear();
        bool sep = false;
        for (const auto& c : columns) {
            if (sep) line += ',';
            line += format_double(c[r]);
            sep = true;
        }
        line += '\n';
        os << line;
    }
}

}  // namespace ahdyn::csv
