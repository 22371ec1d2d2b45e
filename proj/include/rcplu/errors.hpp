#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rcplu {

/// Bad shape, index or parameter passed by the caller.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A solve was requested on a factorization that flagged a zero pivot.
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// GENP met an exact zero pivot. `step()` is one-based, matching the
/// printed elimination step.
class ZeroPivotError : public std::runtime_error {
public:
    explicit ZeroPivotError(std::size_t step)
        : std::runtime_error("zero pivot at elimination step " + std::to_string(step)),
          step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Growth factor requested for an all-zero input.
class UndefinedGrowthError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Something that should be unreachable happened (e.g. rook cap exceeded).
class InternalInvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed Matrix Market file or key-value config.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rcplu
