#pragma once

#include <cstdint>
#include <random>

#include "rcplu/matrix.hpp"

namespace rcplu {

/// Seeded generator used everywhere randomness enters the library.
///
/// Engine: std::mt19937_64 keyed through std::seed_seq on (seed, stream), so
/// different purposes (matrix entries, right-hand sides, sketches) drawn
/// from one user seed do not share a stream. Normals come from
/// std::normal_distribution (Marsaglia polar method in libstdc++). Sequences
/// are reproducible within one build; no cross-platform promise is made.
class Rng {
public:
    enum class Stream : std::uint32_t {
        matrix = 0,
        rhs = 1,
        sketch = 2,
        generator_aux = 3,
        check = 4,
    };

    explicit Rng(std::uint64_t seed, Stream stream = Stream::matrix) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), 0x9e3779b9u};
        engine_.seed(seq);
    }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    Matrix normal_matrix(std::size_t rows, std::size_t cols) {
        Matrix m(rows, cols);
        double* p = m.data();
        for (std::size_t idx = 0; idx < rows * cols; ++idx) {
            p[idx] = normal();
        }
        return m;
    }

    Vector normal_vector(std::size_t n) {
        Vector v(n);
        for (auto& x : v) {
            x = normal();
        }
        return v;
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace rcplu
