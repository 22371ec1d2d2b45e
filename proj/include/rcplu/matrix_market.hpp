#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rcplu/errors.hpp"
#include "rcplu/matrix.hpp"

// Matrix Market I/O for dense matrices.
//
// Writing always produces the `array real general` layout (column-major,
// one value per line, 17 significant digits so values round-trip exactly).
// Reading additionally accepts `coordinate` files and the `symmetric` /
// `skew-symmetric` qualifiers, expanding everything to a dense Matrix.

namespace rcplu::mm {

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline double parse_real(const std::string& tok, std::size_t line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("matrix market: bad value '" + tok + "' on line " + std::to_string(line));
    }
    return v;
}

inline std::size_t parse_index(const std::string& tok, std::size_t line) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("matrix market: bad integer '" + tok + "' on line " + std::to_string(line));
    }
    return v;
}

} // namespace detail

inline Matrix read(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) {
        throw ParseError("matrix market: empty input");
    }
    ++lineno;
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket" || detail::lower(object) != "matrix") {
        throw ParseError("matrix market: missing '%%MatrixMarket matrix' banner");
    }
    format = detail::lower(format);
    field = detail::lower(field);
    symmetry = detail::lower(symmetry);
    if (format != "array" && format != "coordinate") {
        throw ParseError("matrix market: unsupported format '" + format + "'");
    }
    if (field != "real" && field != "integer" && field != "double") {
        throw ParseError("matrix market: unsupported field '" + field + "'");
    }
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric") {
        throw ParseError("matrix market: unsupported symmetry '" + symmetry + "'");
    }

    // Skip comments and blank lines, then collect all remaining tokens.
    std::vector<std::pair<std::string, std::size_t>> tokens;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '%') {
            continue;
        }
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            tokens.emplace_back(tok, lineno);
        }
    }
    std::size_t pos = 0;
    auto next = [&]() -> const std::pair<std::string, std::size_t>& {
        if (pos >= tokens.size()) {
            throw ParseError("matrix market: unexpected end of data");
        }
        return tokens[pos++];
    };

    const auto& rt = next();
    const std::size_t rows = detail::parse_index(rt.first, rt.second);
    const auto& ct = next();
    const std::size_t cols = detail::parse_index(ct.first, ct.second);
    const bool symmetric = symmetry != "general";
    const double mirror_sign = symmetry == "skew-symmetric" ? -1.0 : 1.0;
    if (symmetric && rows != cols) {
        throw ParseError("matrix market: symmetric matrix must be square");
    }

    std::vector<double> data(rows * cols, 0.0);
    if (format == "array") {
        if (!symmetric) {
            for (std::size_t idx = 0; idx < rows * cols; ++idx) {
                const auto& t = next();
                data[idx] = detail::parse_real(t.first, t.second);
            }
        } else {
            // Lower triangle, column by column.
            for (std::size_t j = 0; j < cols; ++j) {
                const std::size_t start = symmetry == "skew-symmetric" ? j + 1 : j;
                for (std::size_t i = start; i < rows; ++i) {
                    const auto& t = next();
                    const double v = detail::parse_real(t.first, t.second);
                    data[i + j * rows] = v;
                    data[j + i * rows] = mirror_sign * v;
                }
            }
        }
    } else {
        const auto& nt = next();
        const std::size_t nnz = detail::parse_index(nt.first, nt.second);
        for (std::size_t e = 0; e < nnz; ++e) {
            const auto& it = next();
            const auto& jt = next();
            const auto& vt = next();
            const std::size_t i = detail::parse_index(it.first, it.second);
            const std::size_t j = detail::parse_index(jt.first, jt.second);
            if (i == 0 || j == 0 || i > rows || j > cols) {
                throw ParseError("matrix market: entry index out of range on line " +
                                 std::to_string(it.second));
            }
            const double v = detail::parse_real(vt.first, vt.second);
            data[(i - 1) + (j - 1) * rows] += v;
            if (symmetric && i != j) {
                data[(j - 1) + (i - 1) * rows] += mirror_sign * v;
            }
        }
    }
    if (pos != tokens.size()) {
        throw ParseError("matrix market: trailing data after " + std::to_string(pos) + " tokens");
    }
    try {
        return Matrix(rows, cols, std::move(data));
    } catch (const ArgumentError& e) {
        throw ParseError(std::string("matrix market: ") + e.what());
    }
}

inline Matrix read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "' for reading");
    }
    return read(in);
}

inline std::string format_real(double v) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

inline void write(std::ostream& out, ConstMatrixView m, std::string_view comment = {}) {
    out << "%%MatrixMarket matrix array real general\n";
    if (!comment.empty()) {
        std::istringstream cs{std::string(comment)};
        std::string line;
        while (std::getline(cs, line)) {
            out << '%' << line << '\n';
        }
    }
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            out << format_real(m(i, j)) << '\n';
        }
    }
}

inline void write(std::ostream& out, const Matrix& m, std::string_view comment = {}) {
    write(out, m.view(), comment);
}

inline void write_file(const std::string& path, const Matrix& m, std::string_view comment = {}) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    write(out, m, comment);
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

/// Vectors travel as n x 1 array matrices.
inline Matrix as_column(std::span<const double> v) {
    return Matrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

inline Vector to_vector(const Matrix& m) {
    if (m.cols() != 1) {
        throw ArgumentError("expected a single-column matrix for a vector");
    }
    return Vector(m.data(), m.data() + m.rows());
}

} // namespace rcplu::mm
