#ifndef FPHEOM_ERRORS_HPP
#define FPHEOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fpheom {

// Invalid physical input (negative frequency to J, biased NIBA, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Configuration / schema violations. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failures during a run (NaN blow-up, quadrature stall,
// eigen-solver breakdown). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double last_stable_time = -1.0)
        : std::runtime_error(what), last_stable_time(last_stable_time) {}
    double last_stable_time;
};

// Hierarchy would exceed the configured ADO budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mode set failed its reconstruction test against the quadrature oracle.
class CertificationError : public std::runtime_error {
public:
    CertificationError(const std::string& what, double worst_time, double worst_residual)
        : std::runtime_error(what), worst_time(worst_time), worst_residual(worst_residual) {}
    double worst_time;
    double worst_residual;
};

} // namespace fpheom

#endif
