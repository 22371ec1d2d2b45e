#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rcplu/rcplu.hpp"

using namespace rcplu;

namespace {

double max_subdiag(const Matrix& a) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = j + 1; i < a.rows(); ++i) {
            m = std::max(m, std::abs(a(i, j)));
        }
    }
    return m;
}

} // namespace

TEST(Wilkinson, SpecExamples) {
    EXPECT_EQ(gen::wilkinson(3), Matrix::from_rows({{1, 0, 1}, {-1, 1, 1}, {-1, -1, 1}}));
    EXPECT_EQ(gen::wilkinson(1), Matrix::from_rows({{1}}));
    const auto f = factorize(gen::wilkinson(20), PivotStrategy::make(PivotKind::partial), true);
    EXPECT_EQ(element_growth(*f.stats), std::ldexp(1.0, 19));
    EXPECT_THROW(gen::wilkinson(0), ArgumentError);
}

TEST(Wilkinson, EntryCensus) {
    for (std::size_t n : {1u, 2u, 9u, 40u}) {
        const Matrix a = gen::wilkinson(n);
        std::size_t minus = 0;
        for (double v : a.storage()) {
            EXPECT_TRUE(v == -1.0 || v == 0.0 || v == 1.0);
            minus += v == -1.0 ? 1 : 0;
        }
        EXPECT_EQ(minus, n * (n - 1) / 2);
    }
}

TEST(GeneralizedWilkinson, UnitOverrideIsWilkinson) {
    for (std::size_t n : {2u, 5u, 30u}) {
        EXPECT_EQ(gen::generalized_wilkinson(n, 1, 7, true), gen::wilkinson(n));
    }
    EXPECT_THROW(gen::generalized_wilkinson(5, 2, 0, true), ArgumentError);
    EXPECT_THROW(gen::generalized_wilkinson(1, 2, 0), ArgumentError);
}

TEST(GeneralizedWilkinson, SubdiagonalBoundedForManySeeds) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Matrix a = gen::generalized_wilkinson(12, 1 + seed % 4, seed);
        EXPECT_LE(max_subdiag(a), 1.0) << seed;
    }
}

TEST(GeneralizedWilkinson, GeppMakesNoRowExchanges) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Matrix a = gen::generalized_wilkinson(40, 3, seed);
        const auto f = factorize(a, PivotStrategy::make(PivotKind::partial));
        EXPECT_TRUE(f.perm_r.swaps().empty()) << seed;
    }
}

TEST(GeneralizedWilkinson, StructureMatchesDefinition) {
    const Matrix a = gen::generalized_wilkinson(6, 2, 3);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(a(i, i), 1.0);
        for (std::size_t j = i + 1; j + 1 < 6; ++j) {
            EXPECT_EQ(a(i, j), 0.0);
        }
    }
    for (std::size_t i = 0; i + 1 < 6; ++i) {
        EXPECT_EQ(a(i, 5), 1.0);
    }
    EXPECT_EQ(gen::generalized_wilkinson(6, 2, 3), a);
    EXPECT_NE(gen::generalized_wilkinson(6, 2, 4), a);
}

TEST(Volterra, Structure) {
    const std::size_t n = 6;
    const double c = 2.0;
    const double t = 1.5;
    const double ch = c * t / (n - 1);
    const Matrix a = gen::volterra(n, c, t);
    EXPECT_EQ(a(0, 0), 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t nz = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j > i) {
                EXPECT_EQ(a(i, j), 0.0);
            }
            nz += a(i, j) != 0.0 ? 1 : 0;
        }
        EXPECT_EQ(nz, i + 1);
        if (i > 0) {
            EXPECT_DOUBLE_EQ(a(i, i), 1.0 - ch / 2);
            EXPECT_DOUBLE_EQ(a(i, 0), -ch / 2);
            for (std::size_t j = 1; j < i; ++j) {
                EXPECT_DOUBLE_EQ(a(i, j), -ch);
            }
        }
    }
    EXPECT_THROW(gen::volterra(1, c, t), ArgumentError);
    EXPECT_THROW(gen::volterra(5, 0.0, t), ArgumentError);
    EXPECT_THROW(gen::volterra(5, c, -1.0), ArgumentError);
}

TEST(Volterra, RowSumsMonotone) {
    const Matrix a = gen::volterra(50, 2.0, 7.35);
    double prev = 2.0;
    for (std::size_t i = 0; i < 50; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 50; ++j) {
            s += a(i, j);
        }
        EXPECT_LT(s, prev);
        prev = s;
    }
}

TEST(Volterra, SmallStepGivesTinyGeppError) {
    const Matrix a = gen::volterra(100, 1.0, 0.5);
    const auto f = factorize(a, PivotStrategy::make(PivotKind::partial));
    EXPECT_LE(backward_error(a, f), 10 * eps_mach);
}

TEST(Volterra, BorderedFormGrowsUnderGeppNotGercp) {
    const double c = 2.0;
    double prev = 0.0;
    for (std::size_t n : {50u, 100u, 200u}) {
        const Matrix a = gen::volterra(n, c, 0.3 * (n - 1) / c, 1.0);
        const auto pp = factorize(a, PivotStrategy::make(PivotKind::partial), true);
        const double grow = element_growth(*pp.stats);
        EXPECT_GT(grow, prev);
        prev = grow;
        const auto rcp = factorize(a, PivotStrategy::make(PivotKind::rercp), true, 1);
        EXPECT_LT(element_growth(*rcp.stats), grow);
    }
    EXPECT_GT(prev, 1e20);
}

TEST(Gaussian, DeterministicAndStandardized) {
    EXPECT_EQ(gen::gaussian(30, 5), gen::gaussian(30, 5));
    EXPECT_NE(gen::gaussian(30, 5), gen::gaussian(30, 6));
    const Matrix a = gen::gaussian(500, 1);
    double sum = 0.0;
    for (double v : a.storage()) {
        sum += v;
    }
    const double mean = sum / a.storage().size();
    double ss = 0.0;
    for (double v : a.storage()) {
        ss += (v - mean) * (v - mean);
    }
    const double var = ss / (a.storage().size() - 1);
    EXPECT_LE(std::abs(mean), 0.01);
    EXPECT_GE(var, 0.99);
    EXPECT_LE(var, 1.01);
}

TEST(Gaussian, RhsUsesSeparateStream) {
    const Matrix a = gen::gaussian(10, 3);
    const Vector b = gen::rhs_gaussian(10, 3);
    EXPECT_NE(std::vector<double>(a.col(0).begin(), a.col(0).end()), b);
    EXPECT_EQ(gen::rhs_gaussian(10, 3), b);
}

TEST(RookAdversarial, SpecExamples) {
    EXPECT_EQ(gen::rook_adversarial(3), Matrix::from_rows({{1, 2, 0}, {0, 3, 4}, {0, 0, 5}}));
    EXPECT_EQ(gen::rook_adversarial(1, 2.5), Matrix::from_rows({{2.5}}));
    EXPECT_THROW(gen::rook_adversarial(3, 0.0), ArgumentError);
    PivotCounters c;
    pivot_rook(gen::rook_adversarial(50).view(), c);
    EXPECT_EQ(c.rook_alternations, 100u);
}

TEST(DiagDominant, GenpStable) {
    for (std::size_t n : {10u, 100u, 200u}) {
        const Matrix a = gen::diag_dominant(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            double off = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                off += j == i ? 0.0 : std::abs(a(i, j));
            }
            EXPECT_GT(a(i, i), off);
        }
        const auto f = factorize(a, PivotStrategy::make(PivotKind::none), true);
        EXPECT_LE(backward_error(a, f), 100.0 * n * eps_mach);
        EXPECT_LE(element_growth(*f.stats), 4.0);
    }
}

TEST(Spd, SymmetricAndGenpGrowthSmall) {
    for (std::size_t n : {10u, 100u, 200u}) {
        const Matrix a = gen::spd(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < j; ++i) {
                ASSERT_EQ(a(i, j), a(j, i));
            }
        }
        const auto f = factorize(a, PivotStrategy::make(PivotKind::none), true);
        EXPECT_LE(element_growth(*f.stats), 4.0);
    }
}

TEST(GeneratorSpec, ParamsAndDispatch) {
    gen::GeneratorSpec s;
    s.family = gen::parse_family("volterra");
    s.n = 11;
    gen::add_param(s, "volterra_c=2");
    gen::add_param(s, "volterra_T=1.5");
    EXPECT_EQ(gen::generate(s), gen::volterra(11, 2.0, 1.5));
    EXPECT_THROW(gen::add_param(s, "volterra_c"), ArgumentError);
    EXPECT_THROW(gen::add_param(s, "volterra_c=x"), ArgumentError);
    s.params["bogus"] = 1.0;
    EXPECT_THROW(gen::generate(s), ArgumentError);
    EXPECT_THROW(gen::parse_family("hilbert"), ArgumentError);

    gen::GeneratorSpec d;
    d.family = gen::Family::volterra;
    d.n = 200;
    const Matrix v = gen::generate(d);
    // default T puts c h at 0.3
    EXPECT_NEAR(-v(5, 3), 0.3, 1e-15);
}

TEST(GeneratorSpec, FamilyNamesRoundTrip) {
    for (auto f : {gen::Family::wilkinson, gen::Family::generalized_wilkinson, gen::Family::volterra,
                   gen::Family::gaussian, gen::Family::rook_adversarial, gen::Family::identity,
                   gen::Family::diag_dominant, gen::Family::spd}) {
        EXPECT_EQ(gen::parse_family(gen::family_name(f)), f);
        gen::GeneratorSpec s;
        s.family = f;
        s.n = 6;
        s.seed = 2;
        EXPECT_EQ(gen::generate(s), gen::generate(s));
        EXPECT_EQ(gen::generate(s).rows(), 6u);
    }
}
