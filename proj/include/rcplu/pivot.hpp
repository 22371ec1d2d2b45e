#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "rcplu/errors.hpp"
#include "rcplu/factorization.hpp"
#include "rcplu/matrix.hpp"

// Pivot search rules. Each rule looks at the trailing Schur complement (or a
// column of it) through a view and returns zero-based indices relative to
// that view. Ties always resolve to the lowest index; complete pivoting
// breaks ties by column first, then row.

namespace rcplu {

enum class PivotKind { none, partial, complete, rook, l2complete, rercp };

inline std::string_view strategy_name(PivotKind k) {
    switch (k) {
    case PivotKind::none: return "genp";
    case PivotKind::partial: return "gepp";
    case PivotKind::complete: return "gecp";
    case PivotKind::rook: return "gerp";
    case PivotKind::l2complete: return "ge2cp";
    case PivotKind::rercp: return "gercp";
    }
    return "unknown";
}

inline PivotKind parse_strategy(std::string_view name) {
    for (PivotKind k : {PivotKind::none, PivotKind::partial, PivotKind::complete, PivotKind::rook,
                        PivotKind::l2complete, PivotKind::rercp}) {
        if (strategy_name(k) == name) {
            return k;
        }
    }
    throw ArgumentError("unknown pivoting strategy '" + std::string(name) +
                        "' (expected genp, gepp, gecp, gerp, ge2cp or gercp)");
}

/// Every strategy except GENP puts the largest entry of the pivot column on
/// the diagonal, so |L| <= 1.
inline bool is_top_heavy(PivotKind k) noexcept { return k != PivotKind::none; }

struct PartialPivot {
    std::size_t row = 0;
    double magnitude = 0.0; ///< zero means the slice is all zeros
};

/// Index of the largest |x_i|. An all-zero slice returns index 0 with
/// magnitude 0, which callers treat as a singular signal.
inline PartialPivot pivot_partial(std::span<const double> column) {
    if (column.empty()) {
        throw ArgumentError("pivot_partial: empty slice");
    }
    PartialPivot best{0, std::abs(column[0])};
    for (std::size_t i = 1; i < column.size(); ++i) {
        const double a = std::abs(column[i]);
        if (a > best.magnitude) {
            best = {i, a};
        }
    }
    return best;
}

struct PivotPair {
    std::size_t row = 0;
    std::size_t col = 0;
    double magnitude = 0.0;
};

/// Largest-magnitude entry of the whole submatrix.
inline PivotPair pivot_complete(ConstMatrixView s) {
    if (s.empty()) {
        throw ArgumentError("pivot_complete: empty submatrix");
    }
    PivotPair best{0, 0, -1.0};
    for (std::size_t j = 0; j < s.cols(); ++j) {
        const double* c = s.data() + j * s.ld();
        for (std::size_t i = 0; i < s.rows(); ++i) {
            const double a = std::abs(c[i]);
            if (a > best.magnitude) {
                best = {i, j, a};
            }
        }
    }
    return best;
}

/// Rook pivoting: alternate column and row scans until the current entry
/// is maximal in both its row and its column.
///
/// The first scan is over column 0. A later scan only moves when it finds a
/// strictly larger magnitude, so every move strictly increases the pivot
/// and the walk terminates. The number of scans is capped at 2*side+2.
inline PivotPair pivot_rook(ConstMatrixView s, PivotCounters& counters) {
    if (s.empty()) {
        throw ArgumentError("pivot_rook: empty submatrix");
    }
    const std::size_t m = s.rows();
    const std::size_t n = s.cols();
    const std::size_t cap = 2 * std::max(m, n) + 2;
    std::size_t scans = 0;

    auto scan_col = [&](std::size_t j) {
        ++scans;
        counters.comparisons += m - 1;
        return pivot_partial(s.col(j));
    };
    auto scan_row = [&](std::size_t i) {
        ++scans;
        counters.comparisons += n - 1;
        PivotPair best{i, 0, std::abs(s(i, 0))};
        for (std::size_t j = 1; j < n; ++j) {
            const double a = std::abs(s(i, j));
            if (a > best.magnitude) {
                best = {i, j, a};
            }
        }
        return best;
    };

    const PartialPivot first = scan_col(0);
    PivotPair cur{first.row, 0, first.magnitude};
    while (cur.magnitude > 0.0) {
        const PivotPair along_row = scan_row(cur.row);
        if (!(along_row.magnitude > cur.magnitude)) {
            break;
        }
        cur = along_row;
        const PartialPivot along_col = scan_col(cur.col);
        if (!(along_col.magnitude > cur.magnitude)) {
            break;
        }
        cur.row = along_col.row;
        cur.magnitude = along_col.magnitude;
        if (scans > cap) {
            counters.rook_alternations += scans;
            throw InternalInvariantError("rook pivoting exceeded its alternation cap");
        }
    }
    counters.rook_alternations += scans;
    return cur;
}

/// Column with the largest Euclidean norm.
inline std::size_t pivot_l2col(ConstMatrixView s) {
    if (s.empty()) {
        throw ArgumentError("pivot_l2col: empty submatrix");
    }
    std::size_t best = 0;
    double best_norm = detail::norm2(s.col(0));
    for (std::size_t j = 1; j < s.cols(); ++j) {
        const double v = detail::norm2(s.col(j));
        if (v > best_norm) {
            best = j;
            best_norm = v;
        }
    }
    return best;
}

} // namespace rcplu
