#pragma once

#include "tailclass/model.hpp"

namespace tailclass {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    int max_depth = 40;       // bisection depth per seed panel
    double edge_split = 0.05;  // fraction peeled off each endpoint
};

struct QuadratureOutcome {
    double value = 0.0;
    double claimed_error = 0.0;
    long evaluations = 0;
};

// Integrates exp(log_integrand(y)) over (a, b).
//
// The endpoint slices of width edge_split * (b - a) are mapped through
// y = a + t^2 (resp. y = b - t^2) so integrable edge singularities such as
// the Weibull(shape < 1) or Burr(c < 1) density blow-ups become bounded
// integrands. Every piece is then seeded with a geometric ladder of panels
// from both ends (boundary layers and support-edge mass are localized
// without relying on a lucky first sample) and refined worst-first with
// Gauss-Kronrod 7-15 until the summed error estimate drops below
// max(abs_tol, rel_tol * |integral|).
//
// Log-integrand values below -740 contribute exactly 0; the mass dropped
// this way is below e^-740 per unit length, far under abs_tol.
//
// Throws QuadratureFailure when the subdivision budget is exhausted first.
QuadratureOutcome integrate_log(const LogMap& log_integrand, double a, double b,
                                const QuadratureSpec& spec);

}  // namespace tailclass
