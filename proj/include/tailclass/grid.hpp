#pragma once

#include <vector>

#include "tailclass/model.hpp"

namespace tailclass {

// Geometric evaluation grid x_k = x_start * ratio^k, k = 0..count-1.
// The last `window` points form the tail window over which liminf/limsup
// surrogates (windowed min/max) are taken; window >= 8 so they mean
// something.
struct GridSpec {
    double x_start = 1.0;
    double ratio = 0.0;  // filled by defaults_for when 0
    int count = 80;
    int window = 16;

    double point(int k) const;
    std::vector<double> points() const;
    void validate() const;  // throws GridError

    // x_start = 4 * support_low + 1, ratio = 2^(1/4), count 80, window 16.
    // Reaches x ~ 1e6 x_start; quarter-octave spacing resolves log-periodic
    // oscillation in the perturbed Pareto family.
    static GridSpec defaults_for(double support_low);
};

// Shrinks `count` so that every map in `maps` stays finite on
// [x_0, headroom * x_last]. Convolution-backed models evaluate their tails
// by linear-space quadrature and return -inf once the result underflows;
// analytic models are never capped. Throws GridError if fewer than
// `min_points` grid points survive. The window shrinks with the grid but
// never below 8.
GridSpec cap_grid_finite(const std::vector<LogMap>& maps, GridSpec grid,
                         double headroom, int min_points = 12);

}  // namespace tailclass
