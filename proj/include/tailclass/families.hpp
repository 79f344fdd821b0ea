#pragma once

#include <variant>

#include "tailclass/model.hpp"

namespace tailclass {

// Stock analytic families. Each build() result carries exact closed-form
// log-density and log-tail, so they serve as ground truth everywhere else.

struct ParetoSpec {
    double a;  // tail exponent, F(x) = x^-a on [1, inf); requires a > 0
};

struct ExponentialSpec {
    double rate;  // F(x) = exp(-rate x) on [0, inf); requires rate > 0
};

struct WeibullSpec {
    double shape;        // requires shape > 0 (shape < 1 gives a density
    double scale = 1.0;  // singularity at 0, shape > 1 a light tail)
};

struct LognormalSpec {
    double mu = 0.0;
    double sigma = 1.0;  // requires sigma > 0
};

struct BurrSpec {
    double c;  // F(x) = (1 + x^c)^-k on [0, inf); requires c, k > 0
    double k;
};

// F(x) = x^-a exp(p sin(ln x)) on [1, inf). The log-periodic factor makes
// liminf and limsup ratios genuinely different. Requires a >= |p| so the
// hazard (a - p cos(ln x)) / x stays nonnegative and the tail monotone.
struct LogPerturbedParetoSpec {
    double a;
    double p;
};

using FamilySpec = std::variant<ParetoSpec, ExponentialSpec, WeibullSpec,
                                LognormalSpec, BurrSpec, LogPerturbedParetoSpec>;

// Throws InvalidParameter when a family constraint fails.
DistributionModel build(const FamilySpec& spec);

double support_low_of(const FamilySpec& spec);
std::string label_of(const FamilySpec& spec);

// ln erfc(t), stable for large t where erfc itself underflows.
double log_erfc(double t);

}  // namespace tailclass
