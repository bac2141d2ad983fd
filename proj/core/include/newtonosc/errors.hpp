#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace newtonosc {

// Base for every error raised by the library. `kind()` is the stable,
// machine-readable name used in CLI error documents.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& message)
        : Error("SyntaxError", message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class NegativeExponent : public Error {
public:
    explicit NegativeExponent(std::size_t position)
        : Error("NegativeExponent",
                "negative exponent at position " + std::to_string(position)) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& message) : Error("DomainError", message) {}
};

class EmptyPolygon : public Error {
public:
    EmptyPolygon() : Error("EmptyPolygon", "Newton polygon of the zero polynomial is empty") {}
};

class NoCompactEdges : public Error {
public:
    NoCompactEdges() : Error("NoCompactEdges", "Newton polygon has no compact edges") {}
};

class NumericalUnderflow : public Error {
public:
    explicit NumericalUnderflow(double x)
        : Error("NumericalUnderflow",
                "residual below 1e-300 at x = " + std::to_string(x)) {}
};

class ResolutionError : public Error {
public:
    ResolutionError(double lambda, const std::string& message)
        : Error("ResolutionError", message), lambda_(lambda) {}

    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

class NoConvergence : public Error {
public:
    NoConvergence(double previous, double last)
        : Error("NoConvergence", "power iteration did not converge (last Rayleigh quotients " +
                                     std::to_string(previous) + ", " + std::to_string(last) + ")"),
          previous_(previous), last_(last) {}

    double previous() const noexcept { return previous_; }
    double last() const noexcept { return last_; }

private:
    double previous_;
    double last_;
};

class WrongRegion : public Error {
public:
    WrongRegion() : Error("WrongRegion", "mu is only defined for gap blocks") {}
};

class InsufficientSamples : public Error {
public:
    explicit InsufficientSamples(std::size_t have)
        : Error("InsufficientSamples",
                "need at least 4 valid samples, have " + std::to_string(have)) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& message) : Error("InvalidArgument", message) {}
};

}  // namespace newtonosc
