#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace weylspec {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument / contract violation at an API boundary.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Numerical breakdown (step underflow, non-finite state, vanishing Wronskian, ...).
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

/// Config parse/validation failure (CLI exits with status 2 on this).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Square root of a spectral parameter with the branch Im sqrt >= 0.
/// For lambda < 0 this returns i*sqrt(-lambda); for lambda > 0 the positive root.
inline cplx sqrt_upper(const cplx& lambda) {
    cplx r = std::sqrt(lambda);
    if (r.imag() < 0.0) r = -r;
    return r;
}

inline double sq(double x) { return x * x; }

} // namespace weylspec
