#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <string>
#include <vector>

#include "rcplu/detail/kernels.hpp"
#include "rcplu/errors.hpp"
#include "rcplu/matrix.hpp"
#include "rcplu/random.hpp"

// Successive Schur sketching. Psi = Omega * A is formed once, then advanced
// one elimination step at a time by a rank-1 correction so that its live
// columns k..n-1 always equal Omega_R * S_k, where Omega_R holds the columns
// of Omega belonging to the rows still in the Schur complement.

namespace rcplu {

struct SketchConfig {
    std::size_t r = 64;
    double g = 1.0;
    double epsilon = 0.5;
    double delta = 0.01;
    std::size_t block_size = 64;
    bool force_stable_update = false;
    std::uint64_t seed = 0;

    void validate() const {
        if (r < 1) {
            throw ArgumentError("sketch config: r must be at least 1");
        }
        if (!(g > 0.0 && g <= 1.0)) {
            throw ArgumentError("sketch config: g must lie in (0, 1]");
        }
        if (!(epsilon > 0.0 && epsilon < 1.0)) {
            throw ArgumentError("sketch config: epsilon must lie in (0, 1)");
        }
        if (!(delta > 0.0 && delta < 1.0)) {
            throw ArgumentError("sketch config: delta must lie in (0, 1)");
        }
        if (block_size < 1) {
            throw ArgumentError("sketch config: block_size must be at least 1");
        }
    }

    friend bool operator==(const SketchConfig&, const SketchConfig&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out{};
    if constexpr (std::is_unsigned_v<T>) {
        if (!value.empty() && value.front() == '-') {
            throw ParseError("sketch config: '" + key + "' must be nonnegative");
        }
    }
    if (!(in >> out) || !(in >> std::ws).eof()) {
        throw ParseError("sketch config: bad value '" + value + "' for '" + key + "'");
    }
    return out;
}

inline bool parse_flag(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") {
        return true;
    }
    if (value == "0" || value == "false" || value == "no" || value == "off") {
        return false;
    }
    throw ParseError("sketch config: bad flag '" + value + "' for '" + key + "'");
}

} // namespace detail

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
/// Keys not present keep their defaults. The result is validated.
inline SketchConfig read_sketch_config(std::istream& in) {
    SketchConfig c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("sketch config: expected key=value on line " + std::to_string(lineno));
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key == "r") {
            c.r = detail::parse_number<std::size_t>(key, value);
        } else if (key == "g") {
            c.g = detail::parse_number<double>(key, value);
        } else if (key == "epsilon") {
            c.epsilon = detail::parse_number<double>(key, value);
        } else if (key == "delta") {
            c.delta = detail::parse_number<double>(key, value);
        } else if (key == "block_size") {
            c.block_size = detail::parse_number<std::size_t>(key, value);
        } else if (key == "force_stable_update") {
            c.force_stable_update = detail::parse_flag(key, value);
        } else if (key == "seed") {
            c.seed = detail::parse_number<std::uint64_t>(key, value);
        } else {
            throw ParseError("sketch config: unknown key '" + key + "' on line " +
                             std::to_string(lineno));
        }
    }
    try {
        c.validate();
    } catch (const ArgumentError& e) {
        throw ParseError(e.what());
    }
    return c;
}

inline SketchConfig read_sketch_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "' for reading");
    }
    return read_sketch_config(in);
}

inline void write_sketch_config(std::ostream& out, const SketchConfig& c) {
    std::ostringstream s;
    s.precision(17);
    s << "r = " << c.r << '\n'
      << "g = " << c.g << '\n'
      << "epsilon = " << c.epsilon << '\n'
      << "delta = " << c.delta << '\n'
      << "block_size = " << c.block_size << '\n'
      << "force_stable_update = " << (c.force_stable_update ? "true" : "false") << '\n'
      << "seed = " << c.seed << '\n';
    out << s.str();
}

/// Smallest integer r strictly above 4/(eps^2 - eps^3) * ln(n(n+1)/(2 delta)),
/// the sampling dimension under which every Schur column of an n x n matrix
/// keeps its norm within sqrt(1 +- eps) with probability at least 1 - delta.
inline std::size_t required_sampling_dim(std::size_t n, double epsilon, double delta) {
    if (n < 1) {
        throw ArgumentError("required_sampling_dim: n must be at least 1");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw ArgumentError("required_sampling_dim: epsilon and delta must lie in (0, 1)");
    }
    const long double e = epsilon;
    const long double nn = static_cast<long double>(n);
    const long double bound =
        4.0L / (e * e - e * e * e) * std::log(nn * (nn + 1.0L) / (2.0L * delta));
    return static_cast<std::size_t>(std::floor(bound)) + 1;
}

/// Per-vector variant: smallest r with 4/(eps^2 - eps^3) * ln(2/Delta) <= r,
/// i.e. one fixed vector keeps its norm with probability at least 1 - Delta.
inline std::size_t per_vector_sampling_dim(double epsilon, double big_delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(big_delta > 0.0 && big_delta < 1.0)) {
        throw ArgumentError("per_vector_sampling_dim: epsilon and Delta must lie in (0, 1)");
    }
    const long double e = epsilon;
    const long double bound = 4.0L / (e * e - e * e * e) * std::log(2.0L / big_delta);
    return static_cast<std::size_t>(std::ceil(bound));
}

struct SketchState {
    Matrix omega;            ///< r x n, columns follow the rows of the Schur complement
    Matrix psi;              ///< r x n, columns k..n-1 live
    double psi1_norm = 0.0;  ///< ||Psi_1||_{1,2} at initialization
    std::size_t k = 0;       ///< current elimination step (zero-based)
    bool r_clamped = false;  ///< requested r exceeded n and was reduced
    /// Squared column norms of psi, valid for live columns when norms_valid.
    std::vector<double> norm_sq;
    bool norms_valid = false;

    std::size_t r() const noexcept { return psi.rows(); }
    std::size_t n() const noexcept { return psi.cols(); }
    bool degenerate() const noexcept { return psi1_norm == 0.0; }

    void swap_psi_cols(std::size_t a, std::size_t b) {
        psi.swap_cols(a, b);
        if (norms_valid) {
            std::swap(norm_sq[a], norm_sq[b]);
        }
    }
    void swap_omega_cols(std::size_t a, std::size_t b) { omega.swap_cols(a, b); }
};

/// Builds the state from a caller-supplied sampling matrix.
inline SketchState init_sketch_with(const Matrix& a, Matrix omega) {
    if (!a.square()) {
        throw ArgumentError("init_sketch: matrix must be square");
    }
    if (omega.cols() != a.rows() || omega.rows() < 1) {
        throw ArgumentError("init_sketch: sampling matrix must be r x n with r >= 1");
    }
    SketchState s;
    s.omega = std::move(omega);
    s.psi = Matrix(s.omega.rows(), a.cols());
    detail::gemm_accumulate(s.psi.view(), s.omega.view(), a.view(), 1.0);
    s.psi1_norm = a.empty() ? 0.0 : norm_one_two(s.psi);
    s.norm_sq.assign(a.cols(), 0.0);
    return s;
}

/// Samples Omega with i.i.d. N(0,1) entries from `config.seed` and forms
/// Psi = Omega A. With `clamp`, r > n is reduced to n and flagged.
inline SketchState init_sketch(const Matrix& a, const SketchConfig& config, bool clamp = true) {
    config.validate();
    if (!a.square() || a.empty()) {
        throw ArgumentError("init_sketch: matrix must be square and nonempty");
    }
    std::size_t r = config.r;
    bool clamped = false;
    if (clamp && r > a.rows()) {
        r = a.rows();
        clamped = true;
    }
    Rng rng(config.seed, Rng::Stream::sketch);
    SketchState s = init_sketch_with(a, rng.normal_matrix(r, a.rows()));
    s.r_clamped = clamped;
    return s;
}

struct SketchSelection {
    std::size_t column = 0; ///< alpha, absolute index
    std::size_t argmax = 0; ///< ell, absolute index of the largest sketched norm
    double norm_k = 0.0;
    double norm_max = 0.0;
};

/// Thresholded choice over live columns k..n-1: ell is the argmax of the
/// sketched norms (lowest index on ties); keep k when
/// ||Psi(:,k)|| >= g ||Psi(:,ell)||, otherwise pick ell.
inline SketchSelection select_pivot_column(SketchState& s, std::size_t k, double g) {
    if (k >= s.n()) {
        throw ArgumentError("select_pivot_column: step out of range");
    }
    if (!(g > 0.0 && g <= 1.0)) {
        throw ArgumentError("select_pivot_column: g must lie in (0, 1]");
    }
    const std::size_t r = s.r();
    if (!s.norms_valid) {
        for (std::size_t j = k; j < s.n(); ++j) {
            const double* c = s.psi.data() + j * r;
            double acc = 0.0;
            for (std::size_t i = 0; i < r; ++i) {
                acc += c[i] * c[i];
            }
            s.norm_sq[j] = acc;
        }
        s.norms_valid = true;
    }
    std::size_t ell = k;
    double best = s.norm_sq[k];
    for (std::size_t j = k + 1; j < s.n(); ++j) {
        if (s.norm_sq[j] > best) {
            best = s.norm_sq[j];
            ell = j;
        }
    }
    SketchSelection out;
    out.argmax = ell;
    out.norm_k = std::sqrt(s.norm_sq[k]);
    out.norm_max = std::sqrt(best);
    out.column = out.norm_k >= g * out.norm_max ? k : ell;
    return out;
}

namespace detail {

// psi(:, j) -= w * u_j for j in (k, n), refreshing the cached squared norms.
inline void sketch_rank1(SketchState& s, const double* w, ConstMatrixView lu, std::size_t k) {
    const std::size_t r = s.r();
    const std::size_t n = s.n();
    for (std::size_t j = k + 1; j < n; ++j) {
        const double u = lu(k, j);
        double* c = s.psi.data() + j * r;
        // Four partial sums break the add dependency chain.
        double acc[4] = {0.0, 0.0, 0.0, 0.0};
        std::size_t i = 0;
        for (; i + 4 <= r; i += 4) {
            for (std::size_t q = 0; q < 4; ++q) {
                c[i + q] -= w[i + q] * u;
                acc[q] += c[i + q] * c[i + q];
            }
        }
        for (; i < r; ++i) {
            c[i] -= w[i] * u;
            acc[0] += c[i] * c[i];
        }
        s.norm_sq[j] = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    }
    s.norms_valid = true;
    s.k = k + 1;
}

} // namespace detail

/// Psi(:,k+1:n) -= Psi(:,k) U(k,k+1:n) / U(k,k).
inline void update_sketch_fast(SketchState& s, ConstMatrixView lu, std::size_t k) {
    if (k >= s.n() || lu.rows() != s.n() || lu.cols() != s.n()) {
        throw ArgumentError("update_sketch_fast: step or shape out of range");
    }
    const double pivot = lu(k, k);
    if (pivot == 0.0) {
        throw ArgumentError("update_sketch_fast: zero pivot, use the stable update");
    }
    const std::size_t r = s.r();
    std::vector<double> w(r);
    const double* pk = s.psi.data() + k * r;
    for (std::size_t i = 0; i < r; ++i) {
        w[i] = pk[i] / pivot;
    }
    detail::sketch_rank1(s, w.data(), lu, k);
}

/// Psi(:,k+1:n) -= (Omega(:,k) + Omega(:,k+1:n) L(k+1:n,k)) U(k,k+1:n).
inline void update_sketch_stable(SketchState& s, ConstMatrixView lu, std::size_t k) {
    if (k >= s.n() || lu.rows() != s.n() || lu.cols() != s.n()) {
        throw ArgumentError("update_sketch_stable: step or shape out of range");
    }
    const std::size_t r = s.r();
    const std::size_t n = s.n();
    std::vector<double> w(s.omega.data() + k * r, s.omega.data() + (k + 1) * r);
    for (std::size_t i = k + 1; i < n; ++i) {
        const double l = lu(i, k);
        if (l != 0.0) {
            detail::axpy_minus(w.data(), s.omega.data() + i * r, -l, r);
        }
    }
    detail::sketch_rank1(s, w.data(), lu, k);
}

enum class UpdatePath { fast, stable };

inline UpdatePath choose_update_path(const SketchState& s, double pivot, bool force_stable) {
    static const double threshold = std::sqrt(eps_mach);
    if (!force_stable && std::abs(pivot) >= threshold * s.psi1_norm && pivot != 0.0) {
        return UpdatePath::fast;
    }
    return UpdatePath::stable;
}

/// Advances the sketch past step k using the fast formula when the pivot is
/// large relative to ||Psi_1||_{1,2}, the division-free one otherwise.
inline UpdatePath choose_update(SketchState& s, ConstMatrixView lu, std::size_t k,
                                bool force_stable) {
    const UpdatePath path = choose_update_path(s, lu(k, k), force_stable);
    if (path == UpdatePath::fast) {
        update_sketch_fast(s, lu, k);
    } else {
        update_sketch_stable(s, lu, k);
    }
    return path;
}

} // namespace rcplu
