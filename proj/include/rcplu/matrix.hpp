#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rcplu/errors.hpp"

namespace rcplu {

/// Unit roundoff of IEEE binary64; every tolerance in the library is
/// expressed in multiples of this.
inline constexpr double eps_mach = 2.220446049250313e-16;

/// Non-owning column-major window into a Matrix (or any column-major buffer).
template <typename T>
class BasicMatrixView {
public:
    BasicMatrixView() = default;
    BasicMatrixView(T* data, std::size_t rows, std::size_t cols, std::size_t ld)
        : data_(data), rows_(rows), cols_(cols), ld_(ld) {}

    // Allow MatrixView -> ConstMatrixView.
    template <typename U>
        requires std::is_convertible_v<U*, T*>
    BasicMatrixView(const BasicMatrixView<U>& other)
        : data_(other.data()), rows_(other.rows()), cols_(other.cols()), ld_(other.ld()) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t ld() const noexcept { return ld_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
    T* data() const noexcept { return data_; }

    T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i + j * ld_]; }

    std::span<T> col(std::size_t j) const noexcept { return {data_ + j * ld_, rows_}; }

    BasicMatrixView block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) {
            throw ArgumentError("matrix view block out of range");
        }
        return {data_ + r0 + c0 * ld_, nr, nc, ld_};
    }

private:
    T* data_ = nullptr;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t ld_ = 0;
};

using MatrixView = BasicMatrixView<double>;
using ConstMatrixView = BasicMatrixView<const double>;

/// Dense real matrix, column-major, value semantics.
///
/// Entries must be finite when a matrix is built from user data; in-place
/// algorithms may later write anything (including overflowed values) into it.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> col_major)
        : rows_(rows), cols_(cols), data_(std::move(col_major)) {
        if (data_.size() != rows_ * cols_) {
            throw ArgumentError("matrix data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(rows_) + "x" +
                                std::to_string(cols_));
        }
        check_finite();
    }

    /// Row-wise literal, convenient for tests: `Matrix::from_rows({{1, 2}, {3, 4}})`.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const std::size_t m = rows.size();
        const std::size_t n = m == 0 ? 0 : rows.begin()->size();
        Matrix a(m, n);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != n) {
                throw ArgumentError("ragged row list");
            }
            std::size_t j = 0;
            for (double v : row) {
                a(i, j++) = v;
            }
            ++i;
        }
        a.check_finite();
        return a;
    }

    static Matrix identity(std::size_t n) {
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            a(i, i) = 1.0;
        }
        return a;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i + j * rows_]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i + j * rows_]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    const std::vector<double>& storage() const noexcept { return data_; }

    std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const noexcept {
        return {data_.data() + j * rows_, rows_};
    }

    MatrixView view() noexcept { return {data_.data(), rows_, cols_, rows_}; }
    ConstMatrixView view() const noexcept { return {data_.data(), rows_, cols_, rows_}; }

    MatrixView block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) {
        return view().block(r0, c0, nr, nc);
    }
    ConstMatrixView block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        return view().block(r0, c0, nr, nc);
    }

    void swap_cols(std::size_t a, std::size_t b) noexcept {
        if (a == b) {
            return;
        }
        std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * rows_),
                         data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * rows_),
                         data_.begin() + static_cast<std::ptrdiff_t>(b * rows_));
    }

    void swap_rows(std::size_t a, std::size_t b) noexcept {
        if (a == b) {
            return;
        }
        for (std::size_t j = 0; j < cols_; ++j) {
            std::swap(data_[a + j * rows_], data_[b + j * rows_]);
        }
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t j = 0; j < cols_; ++j) {
            for (std::size_t i = 0; i < rows_; ++i) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    void check_finite() const {
        for (std::size_t idx = 0; idx < data_.size(); ++idx) {
            if (!std::isfinite(data_[idx])) {
                throw ArgumentError("non-finite entry at (" + std::to_string(idx % rows_ + 1) +
                                    ", " + std::to_string(idx / rows_ + 1) + ")");
            }
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

using Vector = std::vector<double>;

namespace detail {

// Sum of squares with a scaled fallback when the naive sum over/underflows.
inline double norm2(std::span<const double> x) noexcept {
    double ss = 0.0;
    for (double v : x) {
        ss += v * v;
    }
    if (std::isfinite(ss) && ss > std::numeric_limits<double>::min()) {
        return std::sqrt(ss);
    }
    double scale = 0.0;
    for (double v : x) {
        scale = std::max(scale, std::abs(v));
    }
    if (scale == 0.0 || !std::isfinite(scale)) {
        return scale;
    }
    ss = 0.0;
    for (double v : x) {
        const double t = v / scale;
        ss += t * t;
    }
    return scale * std::sqrt(ss);
}

inline double max_abs(std::span<const double> x) noexcept {
    double m = 0.0;
    for (double v : x) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

inline void require_nonempty(const ConstMatrixView& m, const char* what) {
    if (m.empty()) {
        throw ArgumentError(std::string(what) + ": empty matrix");
    }
}

} // namespace detail

/// Euclidean norm of column `j` restricted to rows `from_row..rows-1` (zero-based).
inline double col_norm2(ConstMatrixView m, std::size_t j, std::size_t from_row) {
    if (j >= m.cols() || from_row >= m.rows()) {
        throw ArgumentError("col_norm2: index out of range");
    }
    return detail::norm2(m.col(j).subspan(from_row));
}

inline double col_norm2(const Matrix& m, std::size_t j, std::size_t from_row = 0) {
    return col_norm2(m.view(), j, from_row);
}

/// Largest column 2-norm, ||M||_{1,2}.
inline double norm_one_two(ConstMatrixView m) {
    detail::require_nonempty(m, "norm_one_two");
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        best = std::max(best, detail::norm2(m.col(j)));
    }
    return best;
}

inline double norm_one_two(const Matrix& m) { return norm_one_two(m.view()); }

/// Largest entry magnitude, ||M||_{1,inf}.
inline double norm_one_inf(ConstMatrixView m) {
    detail::require_nonempty(m, "norm_one_inf");
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        best = std::max(best, detail::max_abs(m.col(j)));
    }
    return best;
}

inline double norm_one_inf(const Matrix& m) { return norm_one_inf(m.view()); }

struct OperatorNorms {
    double one; ///< max absolute column sum
    double inf; ///< max absolute row sum
};

inline OperatorNorms op_norms(ConstMatrixView m) {
    detail::require_nonempty(m, "op_norms");
    std::vector<double> row_sums(m.rows(), 0.0);
    double one = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double a = std::abs(m(i, j));
            s += a;
            row_sums[i] += a;
        }
        one = std::max(one, s);
    }
    return {one, *std::max_element(row_sums.begin(), row_sums.end())};
}

inline OperatorNorms op_norms(const Matrix& m) { return op_norms(m.view()); }

inline double norm_inf(std::span<const double> x) noexcept { return detail::max_abs(x); }

/// y = M x.
inline Vector multiply(const Matrix& m, std::span<const double> x) {
    if (x.size() != m.cols()) {
        throw ArgumentError("multiply: dimension mismatch");
    }
    Vector y(m.rows(), 0.0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const double xj = x[j];
        const auto c = m.col(j);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            y[i] += c[i] * xj;
        }
    }
    return y;
}

/// Permutation of {0..n-1} stored both as an index map and as the ordered
/// list of transpositions that produced it.
///
/// Orientation: for a factorization, `perm_r[i]` is the original row that
/// ended up in position `i`, so A[perm_r[i], perm_c[j]] = (L U)[i, j].
class Permutation {
public:
    struct Swap {
        std::size_t position;
        std::size_t target;
        friend bool operator==(const Swap&, const Swap&) = default;
    };

    Permutation() = default;

    explicit Permutation(std::size_t n) : map_(n) {
        for (std::size_t i = 0; i < n; ++i) {
            map_[i] = i;
        }
    }

    /// Builds from an explicit map; rejects anything that is not a bijection.
    static Permutation from_map(std::vector<std::size_t> map) {
        std::vector<bool> seen(map.size(), false);
        for (std::size_t v : map) {
            if (v >= map.size() || seen[v]) {
                throw ArgumentError("permutation map is not a bijection");
            }
            seen[v] = true;
        }
        Permutation p;
        p.map_ = std::move(map);
        // Recover a transposition sequence (selection-sort style) so the
        // two representations stay consistent.
        std::vector<std::size_t> cur(p.map_.size());
        std::vector<std::size_t> where(p.map_.size());
        for (std::size_t i = 0; i < cur.size(); ++i) {
            cur[i] = i;
            where[i] = i;
        }
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const std::size_t t = where[p.map_[i]];
            if (t != i) {
                p.swaps_.push_back({i, t});
                std::swap(cur[i], cur[t]);
                where[cur[i]] = i;
                where[cur[t]] = t;
            }
        }
        return p;
    }

    std::size_t size() const noexcept { return map_.size(); }
    std::size_t operator[](std::size_t i) const noexcept { return map_[i]; }
    const std::vector<std::size_t>& map() const noexcept { return map_; }
    const std::vector<Swap>& swaps() const noexcept { return swaps_; }

    /// Records the interchange of positions a and b. Identity swaps are not recorded.
    void swap(std::size_t a, std::size_t b) {
        if (a >= map_.size() || b >= map_.size()) {
            throw ArgumentError("permutation swap out of range");
        }
        if (a == b) {
            return;
        }
        std::swap(map_[a], map_[b]);
        swaps_.push_back({a, b});
    }

    bool is_identity() const noexcept {
        for (std::size_t i = 0; i < map_.size(); ++i) {
            if (map_[i] != i) {
                return false;
            }
        }
        return true;
    }

    Permutation inverse() const {
        std::vector<std::size_t> inv(map_.size());
        for (std::size_t i = 0; i < map_.size(); ++i) {
            inv[map_[i]] = i;
        }
        return from_map(std::move(inv));
    }

    /// Replays the recorded transpositions on the identity.
    std::vector<std::size_t> replay() const {
        std::vector<std::size_t> m(map_.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            m[i] = i;
        }
        for (const auto& s : swaps_) {
            std::swap(m[s.position], m[s.target]);
        }
        return m;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) { return a.map_ == b.map_; }

private:
    std::vector<std::size_t> map_;
    std::vector<Swap> swaps_;
};

} // namespace rcplu
