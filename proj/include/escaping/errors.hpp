#pragma once

#include <stdexcept>
#include <string>

namespace escaping {

// Input outside the documented domain of an operation.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solve failed to converge; carries the last residual.
struct NumericError : std::runtime_error {
    NumericError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual(residual) {}
    double residual;
};

// A certificate or verdict could not be established.
struct CertificationError : std::runtime_error {
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

// Pullback cut removed the whole curve: the address and anchor orbit disagree.
struct DegenerateCutError : std::runtime_error {
    explicit DegenerateCutError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace escaping
