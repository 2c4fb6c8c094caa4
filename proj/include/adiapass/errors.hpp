#pragma once

#include <stdexcept>
#include <string>

namespace adiapass {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter violates its documented domain.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Jacobi sweeps exceeded the iteration cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Ground/first-excited gap is numerically zero where a ratio by it is needed.
class SingularGapError : public Error {
public:
    using Error::Error;
};

/// Perturbative formula evaluated at mu0^2 == j1^2.
class ResonanceError : public Error {
public:
    using Error::Error;
};

/// A conservation invariant drifted past tolerance during integration.
class IntegrationAccuracyError : public Error {
public:
    IntegrationAccuracyError(std::string invariant, double time, double deviation)
        : Error("integration accuracy lost: " + invariant + " deviates by " +
                std::to_string(deviation) + " at t = " + std::to_string(time)),
          invariant_(std::move(invariant)), time_(time), deviation_(deviation) {}

    const std::string& invariant() const noexcept { return invariant_; }
    double time() const noexcept { return time_; }
    double deviation() const noexcept { return deviation_; }

private:
    std::string invariant_;
    double time_;
    double deviation_;
};

/// Malformed configuration text. `line()` is 1-based, 0 when not tied to a line.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace adiapass
