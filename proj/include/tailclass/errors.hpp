#pragma once

#include <stdexcept>
#include <string>

namespace tailclass {

// Caller passed parameters outside a family's constraint set.
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Evaluation requested outside a model's support or past its reliable range.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A grid cannot be realized (e.g. u * x_max not representable, or too few
// usable points for a meaningful window).
struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature exhausted its subdivision budget above tolerance.
struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No grid threshold yields a finite positive Potter constant.
struct FitFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ratio-limit estimates are mutually contradictory (cannot be summarized
// as a finite or infinite index).
struct DegenerateRatio : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The Pitman integrand's exponent left the representable range; expected
// for light tails and reported rather than evaluated.
struct OverflowGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Command line could not be turned into a valid run configuration.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tailclass
