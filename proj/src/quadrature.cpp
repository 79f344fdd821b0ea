#include "tailclass/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tailclass/errors.hpp"

namespace tailclass {

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

enum class Piece { LeftEdge, Middle, RightEdge };

struct Mapping {
    Piece piece;
    double anchor;  // a for LeftEdge, b for RightEdge, unused for Middle
};

struct Panel {
    double lo, hi;       // in piece coordinates (t for edges, y for middle)
    double value, error;
    int depth;
    int piece;           // index into the mapping table
    long seq;            // creation order, for deterministic tie-breaks
};

struct PanelWorse {
    bool operator()(const Panel& a, const Panel& b) const {
        if (a.error != b.error) return a.error < b.error;
        return a.seq > b.seq;
    }
};

class Integrator {
public:
    Integrator(const LogMap& log_f, const QuadratureSpec& spec)
        : log_f_(log_f), spec_(spec) {}

    QuadratureOutcome run(double a, double b);

private:
    double integrand(double t, const Mapping& m) {
        double y, jac;
        switch (m.piece) {
            case Piece::LeftEdge: y = m.anchor + t * t; jac = 2.0 * t; break;
            case Piece::RightEdge: y = m.anchor - t * t; jac = 2.0 * t; break;
            default: y = t; jac = 1.0; break;
        }
        ++evals_;
        const double s = log_f_(y);
        if (std::isnan(s)) throw QuadratureFailure("integrand log value is NaN");
        if (s > 700.0) throw QuadratureFailure("integrand exceeds the linear range");
        return s <= -740.0 ? 0.0 : std::exp(s) * jac;
    }

    Panel eval_panel(double lo, double hi, int depth, int piece) {
        const Mapping& m = mappings_[piece];
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        double fv[15];
        fv[7] = integrand(c, m);
        double kron = kWgk[7] * fv[7];
        double gauss = kWg[3] * fv[7];
        for (int j = 0; j < 7; ++j) {
            fv[j] = integrand(c - h * kXgk[j], m);
            fv[14 - j] = integrand(c + h * kXgk[j], m);
            const double pair = fv[j] + fv[14 - j];
            kron += kWgk[j] * pair;
            if (j % 2 == 1) gauss += kWg[j / 2] * pair;  // nodes 1, 3, 5 are Gauss
        }
        // QUADPACK-style safeguard: scale the raw |K - G| difference by the
        // panel's total variation so rough panels are not trusted early.
        const double mean = kron / 2.0;
        double resasc = kWgk[7] * std::abs(fv[7] - mean);
        for (int j = 0; j < 7; ++j)
            resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
        resasc *= h;
        kron *= h;
        gauss *= h;
        double err = std::abs(kron - gauss);
        if (resasc != 0.0 && err != 0.0)
            err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        return Panel{lo, hi, kron, err, depth, piece, seq_++};
    }

    const LogMap& log_f_;
    const QuadratureSpec& spec_;
    std::vector<Mapping> mappings_;
    long evals_ = 0;
    long seq_ = 0;
};

}  // namespace

QuadratureOutcome integrate_log(const LogMap& log_integrand, double a, double b,
                                const QuadratureSpec& spec) {
    if (!(b > a)) return {0.0, 0.0, 0};
    Integrator integ(log_integrand, spec);
    return integ.run(a, b);
}

namespace {

QuadratureOutcome Integrator::run(double a, double b) {
    const double len = b - a;
    const double e = std::clamp(spec_.edge_split, 1e-6, 0.5 - 1e-9);
    const double w = e * len;

    mappings_.clear();
    std::vector<std::pair<double, double>> piece_ranges;
    if (w > 0 && a + w < b - w) {
        mappings_.push_back({Piece::LeftEdge, a});
        piece_ranges.push_back({0.0, std::sqrt(w)});
        mappings_.push_back({Piece::Middle, 0.0});
        piece_ranges.push_back({a + w, b - w});
        mappings_.push_back({Piece::RightEdge, b});
        piece_ranges.push_back({0.0, std::sqrt(w)});
    } else {
        mappings_.push_back({Piece::LeftEdge, a});
        piece_ranges.push_back({0.0, std::sqrt(len)});
    }

    // Geometric ladder of seed panels from both ends of each piece.
    constexpr int kLadder = 14;
    std::vector<Panel> heap;
    for (int pi = 0; pi < static_cast<int>(mappings_.size()); ++pi) {
        auto [lo, hi] = piece_ranges[pi];
        const double plen = hi - lo;
        if (!(plen > 0)) continue;
        std::vector<double> cuts;
        cuts.push_back(lo);
        for (int j = kLadder; j >= 1; --j) cuts.push_back(lo + plen * std::ldexp(1.0, -j));
        for (int j = 1; j <= kLadder; ++j) cuts.push_back(hi - plen * std::ldexp(1.0, -j));
        cuts.push_back(hi);
        for (size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i + 1] > cuts[i]) heap.push_back(eval_panel(cuts[i], cuts[i + 1], 0, pi));
    }

    PanelWorse worse;
    std::make_heap(heap.begin(), heap.end(), worse);
    double total = 0.0, total_err = 0.0;
    for (const Panel& p : heap) { total += p.value; total_err += p.error; }

    std::vector<Panel> stuck;
    constexpr long kMaxPanels = 60000;
    auto tolerance = [&]() { return std::max(spec_.abs_tol, spec_.rel_tol * std::abs(total)); };

    while (total_err > tolerance() && !heap.empty()) {
        if (static_cast<long>(heap.size() + stuck.size()) > kMaxPanels)
            throw QuadratureFailure("quadrature: panel budget exhausted");
        std::pop_heap(heap.begin(), heap.end(), worse);
        Panel p = heap.back();
        heap.pop_back();
        if (p.error == 0.0) { heap.push_back(p); std::push_heap(heap.begin(), heap.end(), worse); break; }
        const double mid = 0.5 * (p.lo + p.hi);
        if (p.depth >= spec_.max_depth || mid <= p.lo || mid >= p.hi) {
            stuck.push_back(p);
            continue;
        }
        Panel l = eval_panel(p.lo, mid, p.depth + 1, p.piece);
        Panel r = eval_panel(mid, p.hi, p.depth + 1, p.piece);
        total += l.value + r.value - p.value;
        total_err += l.error + r.error - p.error;
        heap.push_back(l); std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(r); std::push_heap(heap.begin(), heap.end(), worse);
    }

    // Exact resummation; the incremental tallies can drift after many updates.
    total = 0.0; total_err = 0.0;
    for (const Panel& p : heap) { total += p.value; total_err += p.error; }
    for (const Panel& p : stuck) { total += p.value; total_err += p.error; }

    if (total_err > std::max(spec_.abs_tol, spec_.rel_tol * std::abs(total)) && !stuck.empty())
        throw QuadratureFailure("quadrature: max_depth exhausted, claimed error " +
                                std::to_string(total_err));
    return {total, total_err, evals_};
}

}  // namespace

}  // namespace tailclass
