#include "tailclass/grid.hpp"

#include <algorithm>
#include <cmath>

#include "tailclass/errors.hpp"

namespace tailclass {

double GridSpec::point(int k) const { return x_start * std::pow(ratio, k); }

std::vector<double> GridSpec::points() const {
    std::vector<double> xs(count);
    for (int k = 0; k < count; ++k) xs[k] = point(k);
    return xs;
}

void GridSpec::validate() const {
    if (!(x_start > 0) || !(ratio > 1.0)) throw GridError("grid: need x_start > 0 and ratio > 1");
    if (count < 1) throw GridError("grid: count must be positive");
    if (window < 8) throw GridError("grid: window must be >= 8");
    if (window > count) throw GridError("grid: window exceeds count");
    if (!std::isfinite(point(count - 1))) throw GridError("grid: top point overflows");
}

GridSpec GridSpec::defaults_for(double support_low) {
    GridSpec g;
    g.x_start = 4.0 * support_low + 1.0;
    g.ratio = std::pow(2.0, 0.25);
    g.count = 80;
    g.window = 16;
    return g;
}

GridSpec cap_grid_finite(const std::vector<LogMap>& maps, GridSpec grid,
                         double headroom, int min_points) {
    grid.validate();
    if (!std::isfinite(headroom * grid.point(grid.count - 1)))
        throw GridError("grid: headroom * x_max not representable");
    int usable = 0;
    while (usable < grid.count) {
        const double x = headroom * grid.point(usable);
        bool ok = true;
        for (const auto& m : maps)
            if (!std::isfinite(m(x))) { ok = false; break; }
        if (!ok) break;
        ++usable;
    }
    if (usable < min_points)
        throw GridError("grid: model evaluations underflow after " +
                        std::to_string(usable) + " points");
    grid.count = usable;
    grid.window = std::max(8, std::min(grid.window, usable - 4));
    return grid;
}

}  // namespace tailclass
