#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rcplu/errors.hpp"
#include "rcplu/matrix.hpp"
#include "rcplu/random.hpp"

// Test-matrix generators. Every generator is a pure function of its
// arguments; randomized ones draw from the matrix stream of the given seed.

namespace rcplu::gen {

/// Unit diagonal, -1 below it, ones in the last column.
inline Matrix wilkinson(std::size_t n) {
    if (n < 1) {
        throw ArgumentError("wilkinson: n must be at least 1");
    }
    Matrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        a(j, j) = 1.0;
        for (std::size_t i = j + 1; i < n; ++i) {
            a(i, j) = -1.0;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        a(i, n - 1) = 1.0;
    }
    return a;
}

/// A = L + (1,...,1,0)^T (0,...,0,1) with unit lower triangular L,
/// L(i,j) = -u_i^T W_{i-1} ... W_{j+1} v_j for i > j (the product runs over
/// the W strictly between j and i). Vectors have norm just below 1 and each W
/// is scaled so that sqrt(r) * (largest column norm) <= 1, which bounds its
/// spectral norm by 1 and therefore |L(i,j)| <= 1.
///
/// `unit_override` sets u = v = W = 1 (only meaningful for r = 1), which
/// reproduces wilkinson(n).
inline Matrix generalized_wilkinson(std::size_t n, std::size_t r, std::uint64_t seed,
                                    bool unit_override = false) {
    if (n < 2 || r < 1) {
        throw ArgumentError("generalized_wilkinson: need n >= 2 and r >= 1");
    }
    if (unit_override && r != 1) {
        throw ArgumentError("generalized_wilkinson: the unit override requires r = 1");
    }
    Rng rng(seed, Rng::Stream::matrix);
    constexpr double kShrink = 1.0 - 1e-12;
    auto draw_vector = [&]() {
        std::vector<double> v(r);
        double ss = 0.0;
        for (auto& x : v) {
            x = unit_override ? 1.0 : rng.uniform();
            ss += x * x;
        }
        if (!unit_override) {
            const double scale = kShrink / std::sqrt(ss);
            for (auto& x : v) {
                x *= scale;
            }
        }
        return v;
    };
    std::vector<std::vector<double>> u(n);
    std::vector<std::vector<double>> v(n);
    std::vector<Matrix> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = draw_vector();
        v[i] = draw_vector();
        w[i] = Matrix(r, r);
        double maxcol = 0.0;
        for (std::size_t c = 0; c < r; ++c) {
            double ss = 0.0;
            for (std::size_t rr = 0; rr < r; ++rr) {
                const double x = unit_override ? 1.0 : rng.uniform();
                w[i](rr, c) = x;
                ss += x * x;
            }
            maxcol = std::max(maxcol, std::sqrt(ss));
        }
        if (!unit_override) {
            const double scale = 1.0 / (maxcol * std::sqrt(static_cast<double>(r)));
            for (std::size_t idx = 0; idx < r * r; ++idx) {
                w[i].data()[idx] *= scale;
            }
        }
    }

    Matrix a = Matrix::identity(n);
    std::vector<double> cur(r);
    std::vector<double> next(r);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        cur = v[j];
        for (std::size_t i = j + 1; i < n; ++i) {
            double dot = 0.0;
            for (std::size_t p = 0; p < r; ++p) {
                dot += u[i][p] * cur[p];
            }
            a(i, j) = -dot;
            for (std::size_t p = 0; p < r; ++p) {
                double acc = 0.0;
                for (std::size_t q = 0; q < r; ++q) {
                    acc += w[i](p, q) * cur[q];
                }
                next[p] = acc;
            }
            cur.swap(next);
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        a(i, n - 1) += 1.0;
    }
    return a;
}

/// Trapezoid discretization of x(t) - c * int_0^t x(s) ds on [0, T] with
/// h = T/(n-1): A(0,0) = 1, A(i,i) = 1 - c h/2, A(i,0) = -c h/2 and
/// A(i,j) = -c h for 0 < j < i.
///
/// A nonzero `border` adds a coupling column: -border in rows 0..n-2 of the
/// last column and -border on the last diagonal entry. With border = 1,
/// partial pivoting grows the last column by about
/// ((1 + c h/2) / (1 - c h/2))^{n-1}; border = 0 is the plain lower
/// triangular system, which needs no row exchanges and shows no growth.
inline Matrix volterra(std::size_t n, double c, double t_end, double border = 0.0) {
    if (n < 2 || !(c > 0.0) || !(t_end > 0.0) || !std::isfinite(border)) {
        throw ArgumentError("volterra: need n >= 2, c > 0 and T > 0");
    }
    const double h = t_end / static_cast<double>(n - 1);
    const double ch = c * h;
    Matrix a(n, n);
    a(0, 0) = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        a(i, 0) = -0.5 * ch;
        for (std::size_t j = 1; j < i; ++j) {
            a(i, j) = -ch;
        }
        a(i, i) = 1.0 - 0.5 * ch;
    }
    if (border != 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            a(i, n - 1) -= border;
        }
    }
    return a;
}

/// i.i.d. N(0,1) entries.
inline Matrix gaussian(std::size_t n, std::uint64_t seed) {
    if (n < 1) {
        throw ArgumentError("gaussian: n must be at least 1");
    }
    return Rng(seed, Rng::Stream::matrix).normal_matrix(n, n);
}

/// i.i.d. N(0,1) right-hand side, drawn from a stream separate from the matrix.
inline Vector rhs_gaussian(std::size_t n, std::uint64_t seed) {
    if (n < 1) {
        throw ArgumentError("rhs_gaussian: n must be at least 1");
    }
    return Rng(seed, Rng::Stream::rhs).normal_vector(n);
}

/// Upper bidiagonal with diagonal theta_1, theta_3, ... and superdiagonal
/// theta_2, theta_4, ..., where theta_k = theta_base * k.
inline Matrix rook_adversarial(std::size_t n, double theta_base = 1.0) {
    if (n < 1 || !(theta_base > 0.0) || !std::isfinite(theta_base)) {
        throw ArgumentError("rook_adversarial: need n >= 1 and theta_base > 0");
    }
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = theta_base * static_cast<double>(2 * i + 1);
        if (i + 1 < n) {
            a(i, i + 1) = theta_base * static_cast<double>(2 * i + 2);
        }
    }
    return a;
}

inline Matrix identity(std::size_t n) {
    if (n < 1) {
        throw ArgumentError("identity: n must be at least 1");
    }
    return Matrix::identity(n);
}

/// Gaussian off-diagonal entries with a_ii = 1 + sum_{j != i} |a_ij|.
inline Matrix diag_dominant(std::size_t n, std::uint64_t seed) {
    Matrix a = gaussian(n, seed);
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                off += std::abs(a(i, j));
            }
        }
        a(i, i) = 1.0 + off;
    }
    return a;
}

/// G^T G + n I for Gaussian G. Each (i, j) pair is computed once and
/// mirrored, so the result is exactly symmetric.
inline Matrix spd(std::size_t n, std::uint64_t seed) {
    const Matrix g = gaussian(n, seed);
    Matrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            const double* gi = g.data() + i * n;
            const double* gj = g.data() + j * n;
            double acc = 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                acc += gi[p] * gj[p];
            }
            a(i, j) = acc;
            a(j, i) = acc;
        }
        a(j, j) += static_cast<double>(n);
    }
    return a;
}

enum class Family {
    wilkinson,
    generalized_wilkinson,
    volterra,
    gaussian,
    rook_adversarial,
    identity,
    diag_dominant,
    spd
};

inline std::string_view family_name(Family f) {
    switch (f) {
    case Family::wilkinson: return "wilkinson";
    case Family::generalized_wilkinson: return "generalized_wilkinson";
    case Family::volterra: return "volterra";
    case Family::gaussian: return "gaussian";
    case Family::rook_adversarial: return "rook_adversarial";
    case Family::identity: return "identity";
    case Family::diag_dominant: return "diag_dominant";
    case Family::spd: return "spd";
    }
    return "unknown";
}

inline Family parse_family(std::string_view name) {
    for (Family f : {Family::wilkinson, Family::generalized_wilkinson, Family::volterra,
                     Family::gaussian, Family::rook_adversarial, Family::identity,
                     Family::diag_dominant, Family::spd}) {
        if (family_name(f) == name) {
            return f;
        }
    }
    throw ArgumentError("unknown matrix family '" + std::string(name) + "'");
}

/// Family choice plus parameters. Recognised keys: r_gw, gw_unit (0/1),
/// volterra_c, volterra_T, volterra_border, theta_base. Missing keys take
/// defaults; volterra_T defaults to the value giving c*h = 0.3.
struct GeneratorSpec {
    Family family = Family::gaussian;
    std::size_t n = 0;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;

    double param(const std::string& key, double fallback) const {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }

    void validate() const {
        static const char* known[] = {"r_gw",       "gw_unit",         "volterra_c",
                                      "volterra_T", "volterra_border", "theta_base"};
        for (const auto& [key, value] : params) {
            bool ok = false;
            for (const char* k : known) {
                ok = ok || key == k;
            }
            if (!ok) {
                throw ArgumentError("unknown generator parameter '" + key + "'");
            }
            if (!std::isfinite(value)) {
                throw ArgumentError("generator parameter '" + key + "' is not finite");
            }
        }
        if (n < 1) {
            throw ArgumentError("generator: n must be at least 1");
        }
    }
};

/// Parses "key=value" into the spec's parameter map.
inline void add_param(GeneratorSpec& spec, std::string_view kv) {
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ArgumentError("generator parameter must look like key=value, got '" +
                            std::string(kv) + "'");
    }
    const std::string key(kv.substr(0, eq));
    const std::string value(kv.substr(eq + 1));
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size()) {
        throw ArgumentError("generator parameter '" + key + "' has non-numeric value '" + value + "'");
    }
    spec.params[key] = v;
}

inline Matrix generate(const GeneratorSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n;
    switch (spec.family) {
    case Family::wilkinson:
        return wilkinson(n);
    case Family::generalized_wilkinson: {
        const double r = spec.param("r_gw", 3.0);
        if (!(r >= 1.0) || r != std::floor(r)) {
            throw ArgumentError("r_gw must be a positive integer");
        }
        return generalized_wilkinson(n, static_cast<std::size_t>(r), spec.seed,
                                     spec.param("gw_unit", 0.0) != 0.0);
    }
    case Family::volterra: {
        const double c = spec.param("volterra_c", 2.0);
        const double t = spec.param("volterra_T", 0.3 * static_cast<double>(n - 1) / c);
        return volterra(n, c, t, spec.param("volterra_border", 0.0));
    }
    case Family::gaussian:
        return gaussian(n, spec.seed);
    case Family::rook_adversarial:
        return rook_adversarial(n, spec.param("theta_base", 1.0));
    case Family::identity:
        return identity(n);
    case Family::diag_dominant:
        return diag_dominant(n, spec.seed);
    case Family::spd:
        return spd(n, spec.seed);
    }
    throw InternalInvariantError("unhandled matrix family");
}

} // namespace rcplu::gen
