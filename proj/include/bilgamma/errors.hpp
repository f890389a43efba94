#ifndef BILGAMMA_ERRORS_HPP
#define BILGAMMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bilgamma {

/// Precondition / input violation (bad parameters, argument outside domain).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// A well-posed problem whose mathematical answer is "no solution exists"
/// (condition on the parameters violated). Distinct from input errors so
/// callers can map it to a dedicated exit code.
class NoSolutionError : public std::runtime_error {
public:
    explicit NoSolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical machinery failed to converge (bracket not found, truncation
/// exhausted). Should not occur for valid inputs at default settings.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace bilgamma

#endif
