#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "rcplu/detail/kernels.hpp"
#include "rcplu/errors.hpp"
#include "rcplu/factorization.hpp"
#include "rcplu/matrix.hpp"
#include "rcplu/random.hpp"

namespace rcplu {

// ---------------------------------------------------------------------------
// Growth factors and error metrics

namespace detail {

inline double growth_ratio(const std::vector<double>& per_step, double input, const char* what) {
    if (per_step.empty()) {
        throw ArgumentError(std::string(what) + ": growth statistics were not recorded");
    }
    if (input == 0.0) {
        throw UndefinedGrowthError(std::string(what) + ": input matrix is zero");
    }
    return *std::max_element(per_step.begin(), per_step.end()) / input;
}

} // namespace detail

/// max_k ||S_k||_{1,inf} / ||A||_{1,inf}
inline double element_growth(const GrowthStats& s) {
    return detail::growth_ratio(s.per_step_max_entry, s.input_max_entry, "element_growth");
}

/// max_k ||S_k||_{1,2} / ||A||_{1,2}
inline double column_growth(const GrowthStats& s) {
    return detail::growth_ratio(s.per_step_max_colnorm, s.input_max_colnorm, "column_growth");
}

/// ||A - reconstruct(F)||_{1,inf} / ||A||_{1,inf}
inline double backward_error(const Matrix& a, const Factorization& f) {
    if (a.rows() != f.n() || a.cols() != f.n()) {
        throw ArgumentError("backward_error: shapes differ");
    }
    const double scale = norm_one_inf(a);
    if (scale == 0.0) {
        throw ArgumentError("backward_error: input matrix is zero");
    }
    const Matrix r = reconstruct(f);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < a.storage().size(); ++idx) {
        worst = std::max(worst, std::abs(a.storage()[idx] - r.storage()[idx]));
    }
    return worst / scale;
}

/// ||A x - b||_inf / (||A||_inf ||x||_inf)
inline double relative_residual(const Matrix& a, std::span<const double> x, std::span<const double> b) {
    if (a.cols() != x.size() || a.rows() != b.size()) {
        throw ArgumentError("relative_residual: shapes differ");
    }
    const double xn = norm_inf(x);
    if (xn == 0.0) {
        throw ArgumentError("relative_residual: x is zero");
    }
    Vector ax = multiply(a, x);
    for (std::size_t i = 0; i < ax.size(); ++i) {
        ax[i] -= b[i];
    }
    return norm_inf(ax) / (op_norms(a).inf * xn);
}

// ---------------------------------------------------------------------------
// Closed-form bounds, evaluated in log space

/// Natural log of the GERCP column growth bound
///   (1/g^2) ((1+eps)/(1-eps)) sqrt(e (n+1)) n^{1 + ln((1/g) sqrt((1+eps)/(1-eps)))} n^{ln(n)/2}.
inline double log_gercp_growth_bound(std::size_t n, double epsilon, double g) {
    if (n < 1) {
        throw ArgumentError("gercp_growth_bound: n must be at least 1");
    }
    if (!(epsilon >= 0.0 && epsilon < 1.0) || !(g > 0.0 && g <= 1.0)) {
        throw ArgumentError("gercp_growth_bound: need 0 <= epsilon < 1 and 0 < g <= 1");
    }
    const double ln_n = std::log(static_cast<double>(n));
    const double ln_ratio = std::log((1.0 + epsilon) / (1.0 - epsilon));
    const double ln_kappa = -std::log(g) + 0.5 * ln_ratio;
    return -2.0 * std::log(g) + ln_ratio + 0.5 * (1.0 + std::log(static_cast<double>(n) + 1.0)) +
           (1.0 + ln_kappa) * ln_n + 0.5 * ln_n * ln_n;
}

inline double gercp_growth_bound(std::size_t n, double epsilon, double g) {
    return std::exp(log_gercp_growth_bound(n, epsilon, g));
}

/// ln of sqrt(n) (2 * 3^{1/2} * ... * n^{1/(n-1)})^{1/2}
inline double log_gecp_growth_bound(std::size_t n) {
    if (n < 1) {
        throw ArgumentError("gecp_growth_bound: n must be at least 1");
    }
    double acc = 0.0;
    for (std::size_t k = 2; k <= n; ++k) {
        acc += std::log(static_cast<double>(k)) / static_cast<double>(k - 1);
    }
    return 0.5 * std::log(static_cast<double>(n)) + 0.5 * acc;
}

inline double gecp_growth_bound(std::size_t n) { return std::exp(log_gecp_growth_bound(n)); }

struct GrowthBounds {
    double elem;
    double col;
};

/// Logs of (2^{n-1}, 2^{n-1}/sqrt(n)).
inline GrowthBounds log_gepp_growth_bounds(std::size_t n) {
    if (n < 1) {
        throw ArgumentError("gepp_growth_bounds: n must be at least 1");
    }
    const double e = static_cast<double>(n - 1) * std::numbers::ln2;
    return {e, e - 0.5 * std::log(static_cast<double>(n))};
}

inline GrowthBounds gepp_growth_bounds(std::size_t n) {
    const GrowthBounds l = log_gepp_growth_bounds(n);
    return {std::exp(l.elem), std::exp(l.col)};
}

/// ln f(m, t) where f(m, t) = sqrt(prod_{k=2..m} (k+t)^{1/(k-1)}).
inline double log_wilkinson_function(std::size_t m, double t) {
    if (m < 2 || !(t >= 0.0)) {
        throw ArgumentError("wilkinson_function: need m >= 2 and t >= 0");
    }
    double acc = 0.0;
    for (std::size_t k = 2; k <= m; ++k) {
        acc += std::log(static_cast<double>(k) + t) / static_cast<double>(k - 1);
    }
    return 0.5 * acc;
}

inline double wilkinson_function(std::size_t m, double t) {
    return std::exp(log_wilkinson_function(m, t));
}

/// ln of sqrt(e (t+2)(t+1)) m^{ln(m+t)/4} m^{ln((m+t)/m)/4} (t+1)^{ln(t+1)/4}.
inline double log_wilkinson_function_bound(std::size_t m, double t) {
    if (m < 2 || !(t >= 0.0)) {
        throw ArgumentError("wilkinson_function_bound: need m >= 2 and t >= 0");
    }
    const double md = static_cast<double>(m);
    const double ln_m = std::log(md);
    const double ln_t1 = std::log(t + 1.0);
    return 0.5 * (1.0 + std::log(t + 2.0) + ln_t1) + 0.25 * ln_m * std::log(md + t) +
           0.25 * ln_m * std::log((md + t) / md) + 0.25 * ln_t1 * ln_t1;
}

inline double wilkinson_function_bound(std::size_t m, double t) {
    return std::exp(log_wilkinson_function_bound(m, t));
}

// ---------------------------------------------------------------------------
// Executable checks of the supporting lemmas

/// Unit upper triangular B with b_ij = -1/(n-i+1) for i < j (one-based).
inline Matrix special_B(std::size_t n) {
    if (n < 1) {
        throw ArgumentError("special_B: n must be at least 1");
    }
    Matrix b = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = -1.0 / static_cast<double>(n - i);
        for (std::size_t j = i + 1; j < n; ++j) {
            b(i, j) = v;
        }
    }
    return b;
}

/// Closed-form inverse of special_B: c_ij = 1/(n-j+2) for i < j (one-based).
inline Matrix special_B_inverse(std::size_t n) {
    if (n < 1) {
        throw ArgumentError("special_B_inverse: n must be at least 1");
    }
    Matrix c = Matrix::identity(n);
    for (std::size_t j = 1; j < n; ++j) {
        const double v = 1.0 / static_cast<double>(n - j + 1);
        for (std::size_t i = 0; i < j; ++i) {
            c(i, j) = v;
        }
    }
    return c;
}

/// ||B C - I||_{1,inf} for the closed-form inverse C.
inline double verify_special_inverse(std::size_t n) {
    Matrix p = detail::multiply(special_B(n), special_B_inverse(n));
    for (std::size_t i = 0; i < n; ++i) {
        p(i, i) -= 1.0;
    }
    return norm_one_inf(p);
}

/// |1/r - 1/q - sum_{j=r}^{q-1} 1/((j+1) j)|
inline double telescoping_check(std::size_t r, std::size_t q) {
    if (!(q > r && r > 0)) {
        throw ArgumentError("telescoping_check: need q > r > 0");
    }
    double sum = 0.0;
    for (std::size_t j = q - 1; j >= r; --j) {
        const double jd = static_cast<double>(j);
        sum += 1.0 / ((jd + 1.0) * jd);
    }
    return std::abs(1.0 / static_cast<double>(r) - 1.0 / static_cast<double>(q) - sum);
}

struct IntegralCheck {
    double numeric;
    double bound;
};

/// Integral over [1, inf) of c ln(x) / (x (x + c)), mapped to [0, 1) by
/// x = 1/(1-u) and integrated with tanh-sinh quadrature, against the bound
/// ln(c)^2/2 + ln(c) + 1.
inline IntegralCheck improper_integral_check(double c) {
    if (!(c > 1.0) || !std::isfinite(c)) {
        throw ArgumentError("improper_integral_check: need c > 1");
    }
    auto integrand = [c](double u) {
        const double x = 1.0 / (1.0 - u);
        // dx = x^2 du
        return c * x * std::log(x) / (x + c);
    };
    boost::math::quadrature::tanh_sinh<double> q;
    const double numeric = q.integrate(integrand, 0.0, 1.0, 1e-9);
    const double lc = std::log(c);
    return {numeric, 0.5 * lc * lc + lc + 1.0};
}

/// True when sqrt(1-eps) ||x|| <= ||Omega x|| / sqrt(r) <= sqrt(1+eps) ||x||.
inline bool satisfies_jl(double x_norm, double sketch_norm, std::size_t r, double epsilon) {
    const double scaled = sketch_norm / std::sqrt(static_cast<double>(r));
    return std::sqrt(1.0 - epsilon) * x_norm <= scaled && scaled <= std::sqrt(1.0 + epsilon) * x_norm;
}

/// Number of live columns j of the Schur complement whose sketch Psi(:, j)
/// breaks the eps-JL condition. `schur` is S_k, `psi` the matching r x m
/// block of live sketch columns.
inline std::size_t count_jl_violations(ConstMatrixView schur, ConstMatrixView psi, double epsilon) {
    if (schur.cols() != psi.cols()) {
        throw ArgumentError("count_jl_violations: column counts differ");
    }
    std::size_t bad = 0;
    for (std::size_t j = 0; j < schur.cols(); ++j) {
        if (!satisfies_jl(detail::norm2(schur.col(j)), detail::norm2(psi.col(j)), psi.rows(),
                          epsilon)) {
            ++bad;
        }
    }
    return bad;
}

/// 2 exp(-(eps^2 - eps^3) r / 4): per-vector failure bound of a Gaussian projection.
inline double jl_failure_bound(std::size_t r, double epsilon) {
    return 2.0 * std::exp(-(epsilon * epsilon - epsilon * epsilon * epsilon) *
                          static_cast<double>(r) / 4.0);
}

/// Three-sigma binomial slack for an observed frequency with true rate p.
inline double binomial_slack(double p, std::size_t trials) {
    const double q = std::clamp(p, 0.0, 1.0);
    return 3.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
}

/// Fraction of trials in which a fresh r x d Gaussian Omega breaks the
/// eps-JL condition on one fixed unit vector.
inline double jl_empirical_check(std::size_t d, std::size_t r, double epsilon, std::size_t trials,
                                 std::uint64_t seed) {
    if (d < 1 || r < 1 || trials < 1 || !(epsilon > 0.0 && epsilon < 1.0)) {
        throw ArgumentError("jl_empirical_check: parameters out of range");
    }
    Rng rng(seed, Rng::Stream::check);
    Vector x = rng.normal_vector(d);
    const double xn = detail::norm2(x);
    for (auto& v : x) {
        v /= xn;
    }
    std::size_t bad = 0;
    Vector y(r);
    for (std::size_t t = 0; t < trials; ++t) {
        for (std::size_t i = 0; i < r; ++i) {
            y[i] = 0.0;
        }
        // Omega drawn column by column so y = Omega x needs no r x d buffer.
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t i = 0; i < r; ++i) {
                y[i] += rng.normal() * x[j];
            }
        }
        if (!satisfies_jl(1.0, detail::norm2(y), r, epsilon)) {
            ++bad;
        }
    }
    return static_cast<double>(bad) / static_cast<double>(trials);
}

struct ConcentrationResult {
    double t;
    double exceedance; ///< observed fraction with ||G||_F >= sqrt(r n) + t
    double bound;      ///< exp(-t^2 / 2)
};

/// Samples r x n standard Gaussian matrices and, for t in {1, 2, 3}, counts
/// how often the Frobenius norm reaches sqrt(r n) + t.
inline std::vector<ConcentrationResult> lipschitz_concentration_check(std::size_t r, std::size_t n,
                                                                      std::size_t trials,
                                                                      std::uint64_t seed) {
    if (r < 1 || n < 1 || trials < 1) {
        throw ArgumentError("lipschitz_concentration_check: parameters must be positive");
    }
    Rng rng(seed, Rng::Stream::check);
    const double center = std::sqrt(static_cast<double>(r * n));
    std::vector<ConcentrationResult> out;
    for (double t : {1.0, 2.0, 3.0}) {
        out.push_back({t, 0.0, std::exp(-t * t / 2.0)});
    }
    for (std::size_t trial = 0; trial < trials; ++trial) {
        double ss = 0.0;
        for (std::size_t idx = 0; idx < r * n; ++idx) {
            const double g = rng.normal();
            ss += g * g;
        }
        const double fro = std::sqrt(ss);
        for (auto& res : out) {
            if (fro >= center + res.t) {
                res.exceedance += 1.0;
            }
        }
    }
    for (auto& res : out) {
        res.exceedance /= static_cast<double>(trials);
    }
    return out;
}

} // namespace rcplu
