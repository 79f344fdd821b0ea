#pragma once

#include <functional>
#include <string>

#include "tailclass/errors.hpp"

namespace tailclass {

using LogMap = std::function<double(double)>;

// A distribution on (support_low, inf) described entirely in log space.
//
// All evaluation stays logarithmic until the last possible moment: raw
// tails underflow around x ~ 1e3 for light-tailed families while their
// logs stay exact, and every downstream quantity (hazard, Pitman
// integrand, convolution integrand) is assembled from log terms.
//
// log_tail is total: it returns 0 for x <= support_low (no mass below the
// support, so the survival probability there is 1). log_density is only
// meaningful for x > support_low.
struct DistributionModel {
    double support_low = 0.0;
    LogMap log_density;
    LogMap log_tail;
    std::string label;
};

// h(x) = f(x) / F(x), strictly positive on the support interior.
double hazard(const DistributionModel& model, double x);

// H(x) = -ln F(x); nondecreasing, H(support_low) = 0.
double hazard_function(const DistributionModel& model, double x);

}  // namespace tailclass
