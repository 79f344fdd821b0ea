#pragma once

#include <memory>

#include "tailclass/model.hpp"
#include "tailclass/quadrature.hpp"

namespace tailclass {

// f1 * f2(x) = integral of f1(y) f2(x - y) over the true support overlap.
// Returns 0 when the overlap is empty (x at or below the combined support).
double convolve_density(const DistributionModel& left, const DistributionModel& right,
                        double x, const QuadratureSpec& quad);

// Log of the convolution tail. Evaluated as
//   F2(x - s1) + integral over y in (s2, x - s1) of F1(x - y) f2(y) dy
// (s_i the support infima), which keeps the integrand smooth: the clamp of
// F1 at 1 below its support never lands inside the integration range. The
// sum is formed in linear space from exponentiated log terms; contributions
// whose log falls below -740 are dropped (mass below e-740 per unit length).
// Result is in (-inf, 0]; -inf means the tail underflowed linear range.
double convolution_tail(const DistributionModel& left, const DistributionModel& right,
                        double x, const QuadratureSpec& quad);

// F^2*(x) / F(x); trends to 2 for subexponential models.
double self_convolution_ratio(const DistributionModel& model, double x,
                              const QuadratureSpec& quad);

// Conv tail over the sum of the individual tails, shared-offset arithmetic.
// Trends to 1 exactly for max-sum equivalent pairs.
double max_sum_ratio(const DistributionModel& left, const DistributionModel& right,
                     double x, const QuadratureSpec& quad);

// Hazard rate of the convolution at x.
double convolution_hazard(const DistributionModel& left, const DistributionModel& right,
                          double x, const QuadratureSpec& quad);

// A convolution wearing the DistributionModel contract, so every
// asymptotics and classifier operation applies to it unchanged. Evaluations
// are memoized (the classifier grids revisit the same points heavily); the
// cache is transparent and safe to share across threads.
class ConvolvedModel {
public:
    ConvolvedModel(DistributionModel left, DistributionModel right, QuadratureSpec quad);

    double support_low() const;
    double log_density(double x) const;
    double log_tail(double x) const;
    const DistributionModel& left() const;
    const DistributionModel& right() const;
    const QuadratureSpec& quad() const;

    // The returned model shares this object's cache.
    DistributionModel as_model() const;

private:
    struct State;
    std::shared_ptr<State> state_;
};

}  // namespace tailclass
