// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cavbath {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Carries every violated constraint of a parameter bundle at once.
struct ValidationError final : Error {
    explicit ValidationError(std::vector<std::string> violations_);
    std::vector<std::string> violations;
};

// Secular function evaluated too close to a cotangent pole.
struct PoleProximity final : Error {
    using Error::Error;
};

// No sign change of the secular residual inside an asymptote bracket.
struct BracketFailure final : Error {
    BracketFailure(int bracket_, double lo, double hi, double f_lo, double f_hi);
    int bracket;
};

// Bisection exhausted its iteration budget inside a bracket.
struct ConvergenceFailure final : Error {
    explicit ConvergenceFailure(int bracket_, double residual);
    int bracket;
};

struct ResonantDenominator final : Error {
    using Error::Error;
};

struct NegativeDiscriminant final : Error {
    using Error::Error;
};

struct DeltaTooLarge final : Error {
    using Error::Error;
};

struct LengthMismatch final : Error {
    using Error::Error;
};

struct IntegerU final : Error {
    using Error::Error;
};

struct NegativeDelta final : Error {
    using Error::Error;
};

// Jacobi sweep budget exhausted.
struct NonConvergence final : Error {
    using Error::Error;
};

} // namespace cavbath
