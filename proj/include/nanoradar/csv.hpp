#pragma once

#include <charconv>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nanoradar/errors.hpp"

namespace nanoradar::io {

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Column-oriented CSV with a mandatory header row.
inline void write_csv(std::ostream& os, std::span<const std::string> header,
                      std::span<const std::vector<double>> columns) {
    if (header.size() != columns.size()) throw domain_error("write_csv: header/column count mismatch");
    const size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns)
        if (col.size() != rows) throw domain_error("write_csv: ragged columns");

    for (size_t c = 0; c < header.size(); ++c) {
        if (c) os << ',';
        os << header[c];
    }
    os << '\n';
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c) {
            if (c) os << ',';
            os << format_double(columns[c][r]);
        }
        os << '\n';
    }
}

} // namespace nanoradar::io
