#pragma once

#include <stdexcept>
#include <string>

namespace sgmimo {

/// Invalid or inconsistent configuration (bad frame split, unknown key, ...).
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Non-finite intermediate, failed consistency check, or unstable sum.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature failed to reach its tolerance.
class QuadratureError : public NumericalError {
  public:
    QuadratureError(const std::string& what, double estimate, double error, int subdivisions)
        : NumericalError(what), estimate_(estimate), error_(error), subdivisions_(subdivisions) {}

    double estimate() const noexcept { return estimate_; }
    double error() const noexcept { return error_; }
    int subdivisions() const noexcept { return subdivisions_; }

  private:
    double estimate_;
    double error_;
    int subdivisions_;
};

/// Monte Carlo run produced no usable sample.
class EstimationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace sgmimo
