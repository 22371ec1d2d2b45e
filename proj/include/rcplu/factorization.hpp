#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcplu/detail/kernels.hpp"
#include "rcplu/errors.hpp"
#include "rcplu/matrix.hpp"

namespace rcplu {

/// Per-step Schur complement norms. Entry k is recorded before the
/// elimination of step k (zero-based), so index 0 describes the input.
struct GrowthStats {
    std::vector<double> per_step_max_entry;   ///< ||S_k||_{1,inf}
    std::vector<double> per_step_max_colnorm; ///< ||S_k||_{1,2}
    /// ||S_k(:, alpha_k)||_2, the 2-norm of the chosen pivot column.
    std::vector<double> per_step_pivot_colnorm;
    double input_max_entry = 0.0;
    double input_max_colnorm = 0.0;
};

/// Overhead accounting for the pivot search.
struct PivotCounters {
    std::size_t comparisons = 0;
    std::size_t row_entry_swaps = 0;
    std::size_t col_entry_swaps = 0;
    std::size_t rook_alternations = 0;
};

/// Which update formula advanced the sketch, per run.
struct SketchUsage {
    std::size_t fast_updates = 0;
    std::size_t stable_updates = 0;
    std::size_t sketched_pivots = 0; ///< column choices made from sketch norms
    std::size_t exact_pivots = 0;    ///< column choices made from exact norms
    std::size_t sampling_dim = 0;    ///< r actually used (after clamping)
    bool r_clamped = false;
};

/// Packed LU factors with permutations.
///
/// `lu` holds L strictly below the diagonal (unit diagonal implied) and U on
/// and above it. The permutations satisfy
///   A[perm_r[i], perm_c[j]] = (L U)[i, j].
struct Factorization {
    Matrix lu;
    Permutation perm_r;
    Permutation perm_c;
    bool singular = false;
    std::optional<GrowthStats> stats;
    PivotCounters counters;
    std::optional<SketchUsage> sketch;

    std::size_t n() const noexcept { return lu.rows(); }
};

inline Matrix unit_lower(const Factorization& f) {
    const std::size_t n = f.n();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        l(j, j) = 1.0;
        for (std::size_t i = j + 1; i < n; ++i) {
            l(i, j) = f.lu(i, j);
        }
    }
    return l;
}

inline Matrix upper(const Factorization& f) {
    const std::size_t n = f.n();
    Matrix u(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            u(i, j) = f.lu(i, j);
        }
    }
    return u;
}

/// Rebuilds A from the factors: result[perm_r[i], perm_c[j]] = (L U)[i, j].
inline Matrix reconstruct(const Factorization& f) {
    const std::size_t n = f.n();
    if (f.lu.cols() != n || f.perm_r.size() != n || f.perm_c.size() != n) {
        throw ArgumentError("reconstruct: malformed factorization");
    }
    const Matrix l = unit_lower(f);
    const Matrix u = upper(f);
    Matrix prod(n, n);
    detail::gemm_accumulate(prod.view(), l.view(), u.view(), 1.0);
    Matrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            a(f.perm_r[i], f.perm_c[j]) = prod(i, j);
        }
    }
    return a;
}

/// Solves A x = b with the factors: permute b, unit-lower forward
/// substitution, upper backward substitution, scatter through perm_c.
inline Vector solve(const Factorization& f, std::span<const double> b) {
    const std::size_t n = f.n();
    if (f.lu.cols() != n) {
        throw ArgumentError("solve: factorization is not square");
    }
    if (b.size() != n) {
        throw ArgumentError("solve: right-hand side has length " + std::to_string(b.size()) +
                            ", expected " + std::to_string(n));
    }
    if (f.singular) {
        throw SingularSystemError("solve: factorization is singular");
    }
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = b[f.perm_r[i]];
    }
    // Column-oriented substitutions keep the access pattern contiguous.
    for (std::size_t j = 0; j < n; ++j) {
        const double yj = y[j];
        if (yj != 0.0) {
            const double* lcol = f.lu.data() + j * n;
            for (std::size_t i = j + 1; i < n; ++i) {
                y[i] -= lcol[i] * yj;
            }
        }
    }
    for (std::size_t jj = n; jj-- > 0;) {
        const double* ucol = f.lu.data() + jj * n;
        y[jj] /= ucol[jj];
        const double yj = y[jj];
        if (yj != 0.0) {
            for (std::size_t i = 0; i < jj; ++i) {
                y[i] -= ucol[i] * yj;
            }
        }
    }
    Vector x(n);
    for (std::size_t j = 0; j < n; ++j) {
        x[f.perm_c[j]] = y[j];
    }
    return x;
}

} // namespace rcplu
