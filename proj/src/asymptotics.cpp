#include "tailclass/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailclass/errors.hpp"

namespace tailclass {

namespace {

constexpr double kTinyRatio = 1e-300;  // below this a ratio counts as vanished
constexpr double kSlopeCap = 100.0;    // steeper regressions mean +-infinity

struct LineFit {
    double slope = 0.0;
    double residual = 0.0;
};

// Least-squares line with fixed summation order (deterministic).
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) { mx += xs[i]; my += ys[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    LineFit f;
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    const double icept = my - f.slope * mx;
    for (size_t i = 0; i < n; ++i)
        f.residual = std::max(f.residual, std::abs(ys[i] - (icept + f.slope * xs[i])));
    return f;
}

}  // namespace

LimitEstimate windowed_limit(const std::vector<double>& xs,
                             const std::vector<double>& vals, const GridSpec& grid) {
    const int n = static_cast<int>(vals.size());
    const int w = std::min(grid.window, n);
    if (n < 1 || w < 1) throw GridError("windowed_limit: empty sequence");

    LimitEstimate est;
    est.grid = grid;
    est.lower = est.upper = vals[n - w];
    for (int k = n - w; k < n; ++k) {
        est.lower = std::min(est.lower, vals[k]);
        est.upper = std::max(est.upper, vals[k]);
    }
    const int plo = std::max(0, n - 2 * w);
    const int phi = std::max(plo + 1, n - w);
    est.prev_lower = est.prev_upper = vals[plo];
    for (int k = plo; k < phi; ++k) {
        est.prev_lower = std::min(est.prev_lower, vals[k]);
        est.prev_upper = std::max(est.prev_upper, vals[k]);
    }
    std::vector<double> lx(w), wy(w);
    for (int k = 0; k < w; ++k) {
        lx[k] = std::log(xs[n - w + k]);
        wy[k] = vals[n - w + k];
    }
    bool finite = true;
    for (double v : wy) finite = finite && std::isfinite(v);
    est.trend = finite ? fit_line(lx, wy).slope : std::numeric_limits<double>::quiet_NaN();
    return est;
}

LimitEstimate ratio_limit(const LogMap& g, double u, const GridSpec& grid) {
    grid.validate();
    if (!(u >= 1.0)) throw GridError("ratio_limit: u must be >= 1");
    const double x_top = grid.point(grid.count - 1);
    if (!std::isfinite(u * x_top)) throw GridError("ratio_limit: u * x_max overflows");

    const int first = std::max(0, grid.count - 2 * grid.window);
    std::vector<double> xs, vals;
    xs.reserve(grid.count - first);
    for (int k = first; k < grid.count; ++k) {
        const double x = grid.point(k);
        const double d = g(u * x) - g(x);
        if (std::isnan(d)) throw GridError("ratio_limit: map not finite at x=" + std::to_string(x));
        xs.push_back(x);
        vals.push_back(std::exp(std::min(d, 700.0)));
    }
    return windowed_limit(xs, vals, grid);
}

IndexEstimate matuszewska_indices(const LogMap& g, const GridSpec& grid,
                                  const std::vector<double>& u_grid) {
    if (u_grid.size() < 4) throw GridError("matuszewska_indices: need >= 4 u values");
    for (double u : u_grid)
        if (!(u > 1.0)) throw GridError("matuszewska_indices: u values must be > 1");

    std::vector<double> lowers, uppers, lnu;
    for (double u : u_grid) {
        const LimitEstimate est = ratio_limit(g, u, grid);
        lowers.push_back(est.lower);
        uppers.push_back(est.upper);
        lnu.push_back(std::log(u));
    }

    // Summarizes one side (-ln of the ratio estimates regressed on ln u).
    // Vanished ratios are only consistent with a +infinity index when they
    // sit at the large-u end of the sweep.
    auto fit_index = [&](const std::vector<double>& vals, double& out, bool& inf_flag,
                         double& residual) {
        int n_zero = 0;
        for (size_t i = 0; i < vals.size(); ++i) {
            if (vals[i] < kTinyRatio) {
                ++n_zero;
            } else if (n_zero > 0) {
                // A vanished ratio at some u with a live ratio at larger u
                // cannot be summarized as any index.
                throw DegenerateRatio("ratio vanished at u=" + std::to_string(u_grid[i - 1]) +
                                      " but recovered at u=" + std::to_string(u_grid[i]));
            }
        }
        if (n_zero > 0) {
            inf_flag = true;
            out = std::numeric_limits<double>::infinity();
            return;
        }
        std::vector<double> ys;
        for (double v : vals) ys.push_back(-std::log(v));
        const LineFit f = fit_line(lnu, ys);
        residual = std::max(residual, f.residual);
        if (f.slope > kSlopeCap) {
            inf_flag = true;
            out = std::numeric_limits<double>::infinity();
        } else if (f.slope < -kSlopeCap) {
            inf_flag = true;
            out = -std::numeric_limits<double>::infinity();
        } else {
            out = f.slope;
        }
    };

    IndexEstimate idx;
    idx.u_grid = u_grid;
    fit_index(lowers, idx.gamma, idx.gamma_infinite, idx.residual);
    fit_index(uppers, idx.delta, idx.delta_infinite, idx.residual);
    return idx;
}

LimitEstimate xh_limits(const DistributionModel& model, const GridSpec& grid) {
    grid.validate();
    const int first = std::max(0, grid.count - 2 * grid.window);
    std::vector<double> xs, vals;
    for (int k = first; k < grid.count; ++k) {
        const double x = grid.point(k);
        xs.push_back(x);
        vals.push_back(x * hazard(model, x));
    }
    return windowed_limit(xs, vals, grid);
}

PotterFit fit_potter(const LogMap& g, double exponent, PotterDirection direction,
                     const GridSpec& grid) {
    grid.validate();
    if (!std::isfinite(exponent)) throw FitFailed("fit_potter: exponent must be finite");
    const bool upper = direction == PotterDirection::UpperBound;

    // s_k = g(x_k) + exponent ln x_k turns the pairwise certificate into
    // ln C = extremum over i <= j of (s_j - s_i); the extremum over all
    // pairs past i0 follows from one suffix sweep.
    auto scores = [&](const GridSpec& gs) {
        std::vector<double> s(gs.count);
        for (int k = 0; k < gs.count; ++k) {
            const double x = gs.point(k);
            s[k] = g(x) + exponent * std::log(x);
        }
        return s;
    };

    const std::vector<double> s = scores(grid);
    std::vector<double> suffix(grid.count);
    double run = upper ? -std::numeric_limits<double>::infinity()
                       : std::numeric_limits<double>::infinity();
    for (int k = grid.count - 1; k >= 0; --k) {
        run = upper ? std::max(run, s[k]) : std::min(run, s[k]);
        suffix[k] = run;
    }

    // x0 may not swallow the tail window; a certificate over too few points
    // is vacuous.
    const int last_usable_i0 = grid.count - grid.window;
    int chosen = -1;
    double log_c = 0.0;
    for (int i0 = 0; i0 <= last_usable_i0; ++i0) {
        double best = upper ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
        for (int i = i0; i < grid.count; ++i) {
            const double cand = suffix[i] - s[i];
            best = upper ? std::max(best, cand) : std::min(best, cand);
        }
        if (std::abs(best) <= 700.0) {
            chosen = i0;
            log_c = best;
            break;
        }
    }
    if (chosen < 0)
        throw FitFailed("fit_potter: no grid x0 yields a positive finite constant");

    PotterFit fit;
    fit.exponent = exponent;
    fit.direction = direction;
    fit.C = std::exp(log_c);
    fit.x0 = grid.point(chosen);

    // Re-verification on a 3x denser grid over the same range.
    GridSpec dense = grid;
    dense.count = 3 * (grid.count - 1) + 1;
    dense.ratio = std::pow(grid.ratio, 1.0 / 3.0);
    dense.window = std::min(dense.window, dense.count);
    const std::vector<double> sd = scores(dense);
    double worst = -std::numeric_limits<double>::infinity();
    double run2 = upper ? -std::numeric_limits<double>::infinity()
                        : std::numeric_limits<double>::infinity();
    std::vector<double> suffix2(dense.count);
    for (int k = dense.count - 1; k >= 0; --k) {
        run2 = upper ? std::max(run2, sd[k]) : std::min(run2, sd[k]);
        suffix2[k] = run2;
    }
    for (int i = 0; i < dense.count; ++i) {
        if (dense.point(i) < fit.x0 * (1.0 - 1e-12)) continue;
        // violation of "ratio <= C (y/x)^-e" (resp >=) in relative terms
        const double dev = upper ? suffix2[i] - sd[i] - log_c : log_c - (suffix2[i] - sd[i]);
        worst = std::max(worst, std::expm1(dev));
    }
    fit.max_violation = worst;
    return fit;
}

}  // namespace tailclass
