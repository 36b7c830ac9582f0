#pragma once

#include <stdexcept>
#include <string>

namespace randzeros {

// Base error carrying a stable machine-parsable class tag. The CLI prints
// "error: <cls>: <message>" on failure; tests match on cls.
class Error : public std::runtime_error {
public:
    Error(std::string cls, const std::string& message)
        : std::runtime_error(message), cls_(std::move(cls)) {}
    const std::string& cls() const noexcept { return cls_; }

private:
    std::string cls_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& message) : Error("domain-error", message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io-error", message) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& message) : Error("parse-error", message) {}
};

class UnsupportedSizeError : public Error {
public:
    explicit UnsupportedSizeError(const std::string& message)
        : Error("unsupported-size", message) {}
};

// Two points of a configuration sit below the singularity floor; pairwise
// kernels are not evaluable. Carries the offending minimum chordal distance.
class DegenerateConfigurationError : public Error {
public:
    DegenerateConfigurationError(const std::string& message, double min_pair_chordal)
        : Error("degenerate-configuration", message), min_pair_chordal_(min_pair_chordal) {}
    double min_pair_chordal() const noexcept { return min_pair_chordal_; }

private:
    double min_pair_chordal_;
};

class SingularityError : public Error {
public:
    explicit SingularityError(const std::string& message) : Error("singularity", message) {}
};

class OptimizationFailureError : public Error {
public:
    explicit OptimizationFailureError(const std::string& message)
        : Error("optimization-failure", message) {}
};

} // namespace randzeros
