#pragma once

#include <algorithm>
#include <cstddef>

#include "rcplu/matrix.hpp"

namespace rcplu::detail {

// C += sign * A * B for column-major views. Inner products are accumulated
// in ascending k order per entry. Register-blocked 8x4 micro-kernel over
// row panels of kRowBlock so the A panel stays cache resident.
inline void gemm_accumulate(MatrixView c, ConstMatrixView a, ConstMatrixView b, double sign) {
    const std::size_t m = c.rows();
    const std::size_t n = c.cols();
    const std::size_t kk = a.cols();
    if (m == 0 || n == 0 || kk == 0) {
        return;
    }
    constexpr std::size_t kRowBlock = 256;
    constexpr std::size_t kDepthBlock = 128;
    constexpr std::size_t MR = 8;
    constexpr std::size_t NR = 4;

    const std::size_t lda = a.ld();
    const std::size_t ldb = b.ld();
    const std::size_t ldc = c.ld();
    const double* ap = a.data();
    const double* bp = b.data();
    double* cp = c.data();

    for (std::size_t p0 = 0; p0 < kk; p0 += kDepthBlock) {
        const std::size_t p1 = std::min(kk, p0 + kDepthBlock);
        for (std::size_t i0 = 0; i0 < m; i0 += kRowBlock) {
            const std::size_t i1 = std::min(m, i0 + kRowBlock);
            std::size_t j = 0;
            for (; j + NR <= n; j += NR) {
                std::size_t i = i0;
                for (; i + MR <= i1; i += MR) {
                    double acc[NR][MR] = {};
                    for (std::size_t p = p0; p < p1; ++p) {
                        const double* acol = ap + i + p * lda;
                        const double b0 = bp[p + (j + 0) * ldb];
                        const double b1 = bp[p + (j + 1) * ldb];
                        const double b2 = bp[p + (j + 2) * ldb];
                        const double b3 = bp[p + (j + 3) * ldb];
                        for (std::size_t r = 0; r < MR; ++r) {
                            const double av = acol[r];
                            acc[0][r] += av * b0;
                            acc[1][r] += av * b1;
                            acc[2][r] += av * b2;
                            acc[3][r] += av * b3;
                        }
                    }
                    for (std::size_t q = 0; q < NR; ++q) {
                        double* ccol = cp + i + (j + q) * ldc;
                        for (std::size_t r = 0; r < MR; ++r) {
                            ccol[r] += sign * acc[q][r];
                        }
                    }
                }
                for (; i < i1; ++i) {
                    double acc[NR] = {};
                    for (std::size_t p = p0; p < p1; ++p) {
                        const double av = ap[i + p * lda];
                        for (std::size_t q = 0; q < NR; ++q) {
                            acc[q] += av * bp[p + (j + q) * ldb];
                        }
                    }
                    for (std::size_t q = 0; q < NR; ++q) {
                        cp[i + (j + q) * ldc] += sign * acc[q];
                    }
                }
            }
            for (; j < n; ++j) {
                for (std::size_t i = i0; i < i1; ++i) {
                    double acc = 0.0;
                    for (std::size_t p = p0; p < p1; ++p) {
                        acc += ap[i + p * lda] * bp[p + j * ldb];
                    }
                    cp[i + j * ldc] += sign * acc;
                }
            }
        }
    }
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ArgumentError("matrix multiply: inner dimensions differ");
    }
    Matrix c(a.rows(), b.cols());
    gemm_accumulate(c.view(), a.view(), b.view(), 1.0);
    return c;
}

// y[0..n) -= alpha * x[0..n)
inline void axpy_minus(double* y, const double* x, double alpha, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] -= alpha * x[i];
    }
}

// y[0..m) -= A x for column-major m x k A, four columns per pass. Each entry
// sees the same subtraction sequence as k successive axpy_minus calls.
inline void gemv_minus(double* y, ConstMatrixView a, const double* x) noexcept {
    const std::size_t m = a.rows();
    const std::size_t k = a.cols();
    const std::size_t lda = a.ld();
    const double* ap = a.data();
    std::size_t p = 0;
    for (; p + 4 <= k; p += 4) {
        const double* c0 = ap + p * lda;
        const double* c1 = c0 + lda;
        const double* c2 = c1 + lda;
        const double* c3 = c2 + lda;
        const double x0 = x[p];
        const double x1 = x[p + 1];
        const double x2 = x[p + 2];
        const double x3 = x[p + 3];
        for (std::size_t i = 0; i < m; ++i) {
            double v = y[i];
            v -= x0 * c0[i];
            v -= x1 * c1[i];
            v -= x2 * c2[i];
            v -= x3 * c3[i];
            y[i] = v;
        }
    }
    for (; p < k; ++p) {
        axpy_minus(y, ap + p * lda, x[p], m);
    }
}

} // namespace rcplu::detail
