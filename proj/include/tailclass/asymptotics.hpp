#pragma once

#include <vector>

#include "tailclass/grid.hpp"
#include "tailclass/model.hpp"

namespace tailclass {

// Finite-range surrogate for a liminf/limsup pair: min and max of the
// sequence over the last `window` grid points, plus the same statistics one
// window earlier and the least-squares slope of the sequence against ln x
// over the window. The previous-window values let callers tell a sequence
// that has stabilized (oscillating or constant) from one still decaying or
// growing; the trend is the local convergence diagnostic.
struct LimitEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double trend = 0.0;
    double prev_lower = 0.0;
    double prev_upper = 0.0;
    GridSpec grid;
};

// Estimated Matuszewska pair for a log-valued map g. gamma (upper index)
// comes from regressing -ln(liminf estimate of g(ux)/g(x)) on ln u, delta
// (lower index) from the limsup estimates. Ratios that underflow at the
// large-u end of a consistently decaying sweep are summarized as an
// infinite index rather than a number from a saturated regression.
struct IndexEstimate {
    double gamma = 0.0;
    double delta = 0.0;
    bool gamma_infinite = false;
    bool delta_infinite = false;
    double residual = 0.0;  // max absolute regression deviation
    std::vector<double> u_grid;
};

enum class PotterDirection { UpperBound, LowerBound };

// Fitted certificate for a Potter-type inequality at a chosen exponent:
//   UpperBound:  g-ratio(y, x) <= C  (y/x)^-exponent,  y >= x >= x0
//   LowerBound:  g-ratio(y, x) >= C' (y/x)^-exponent,  y >= x >= x0
// where g-ratio(y, x) = exp(g(y) - g(x)). By construction the inequality
// holds on every ordered pair of fit-grid points past x0; max_violation
// reports the worst relative violation on a 3x denser verification grid
// (<= 0 when the fit extends cleanly).
struct PotterFit {
    double exponent = 0.0;
    PotterDirection direction = PotterDirection::UpperBound;
    double C = 0.0;
    double x0 = 0.0;
    double max_violation = 0.0;
};

// Windowed statistics of an explicit sequence (vals[k] at xs[k]).
LimitEstimate windowed_limit(const std::vector<double>& xs,
                             const std::vector<double>& vals, const GridSpec& grid);

// Estimates liminf/limsup of exp(g(ux) - g(x)) as x -> inf. Only the last
// 2 * window grid points are evaluated; the rest of the grid cannot affect
// the windowed statistics. u = 1 is allowed and gives the identity ratio.
LimitEstimate ratio_limit(const LogMap& g, double u, const GridSpec& grid);

// Nested-limit scheme mirroring gamma_g = -lim_u log g*(u) / log u: the
// inner x-limit per u via ratio_limit, then a regression over ln u. The
// regression (rather than the largest-u point alone) damps inner-limit
// noise. u_grid needs >= 4 values > 1.
IndexEstimate matuszewska_indices(const LogMap& g, const GridSpec& grid,
                                  const std::vector<double>& u_grid);

// Windowed estimate of M1 = liminf x h(x) (lower) and M2 = limsup (upper).
LimitEstimate xh_limits(const DistributionModel& model, const GridSpec& grid);

// Fits the smallest certificate constant over all ordered grid pairs with
// x >= x0, choosing the smallest grid x0 whose constant is finite and
// positive. Throws FitFailed when no x0 works.
PotterFit fit_potter(const LogMap& g, double exponent, PotterDirection direction,
                     const GridSpec& grid);

}  // namespace tailclass
