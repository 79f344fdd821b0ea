#include "tailclass/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tailclass/errors.hpp"

namespace tailclass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

EvidenceItem item(std::string name, const LimitEstimate& e) {
    return {std::move(name), e.lower, e.upper, e.trend};
}

EvidenceItem item(std::string name, double v) { return {std::move(name), v, v, 0.0}; }

// --- window-to-window shape predicates ------------------------------------
//
// The windowed min/max alone cannot separate "converged to a small positive
// limit" from "still heading to zero"; comparing against the previous
// window's statistics can. A bounded log-periodic oscillation moves the
// windowed min by less than its envelope between adjacent windows, a
// genuinely decaying sequence shrinks it geometrically.

bool stabilized_positive(const LimitEstimate& e, const ClassifierConfig& c) {
    return e.lower > c.pos_floor && e.lower >= c.drop_frac * e.prev_lower;
}

bool vanishing(const LimitEstimate& e, const ClassifierConfig& c) {
    if (e.upper < c.zero_ceiling) return true;
    return e.prev_upper > 0 && e.upper <= c.drop_frac * e.prev_upper && e.trend <= 0;
}

bool bounded_flat(const LimitEstimate& e, const ClassifierConfig& c) {
    return std::isfinite(e.upper) &&
           e.upper <= c.flat_growth * std::max(e.prev_upper, 1e-300);
}

bool strongly_growing(const LimitEstimate& e, const ClassifierConfig& c) {
    return e.prev_upper > 0 && e.upper >= c.unbounded_growth * e.prev_upper;
}

bool rising_toward_one(const LimitEstimate& e, const ClassifierConfig& c) {
    return e.upper >= c.rise_level && e.prev_upper > 0 && e.upper >= c.rise_frac * e.prev_upper;
}

// Caps a grid so every listed map stays finite up to headroom * x. Analytic
// models are never capped; convolution-backed tails go -inf once their
// linear-space quadrature underflows, and the cap keeps classifiers off
// that region.
GridSpec tail_grid(const DistributionModel& m, const GridSpec& g, double headroom) {
    return cap_grid_finite({m.log_tail}, g, headroom);
}

GridSpec hazard_grid(const DistributionModel& m, const GridSpec& g, double headroom) {
    return cap_grid_finite({m.log_tail, m.log_density}, g, headroom);
}

// Windowed statistics of vals(x) over the last 2 * window points of `g`.
template <typename F>
LimitEstimate windowed_of(const GridSpec& g, F&& f) {
    const int first = std::max(0, g.count - 2 * g.window);
    std::vector<double> xs, vals;
    for (int k = first; k < g.count; ++k) {
        xs.push_back(g.point(k));
        vals.push_back(f(xs.back()));
    }
    return windowed_limit(xs, vals, g);
}

ClassVerdict make_verdict(ClassId id, Verdict v, std::string route, double tol,
                          std::vector<EvidenceItem> ev, const GridSpec& g,
                          std::string note = {}) {
    return ClassVerdict{id, v, std::move(route), tol, std::move(ev), std::move(note), g};
}

// Strict two-route agreement: the two characterizations are equivalent in
// the limit, so there is no verdict unless both speak and concur.
ClassVerdict combine_strict(ClassId id, const ClassVerdict& a, const ClassVerdict& b,
                            double tol, const GridSpec& g) {
    std::vector<EvidenceItem> ev = a.evidence;
    ev.insert(ev.end(), b.evidence.begin(), b.evidence.end());
    if (a.verdict == b.verdict && a.verdict != Verdict::Inconclusive)
        return make_verdict(id, a.verdict, a.route + "+" + b.route, tol, std::move(ev), g);
    std::string note = "routes " + a.route + "/" + b.route + " returned " +
                       std::string(to_string(a.verdict)) + "/" + to_string(b.verdict);
    if (!a.note.empty()) note += "; " + a.note;
    if (!b.note.empty()) note += "; " + b.note;
    return make_verdict(id, Verdict::Inconclusive, "both", tol, std::move(ev), g, note);
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Member: return "Member";
        case Verdict::NonMember: return "NonMember";
        default: return "Inconclusive";
    }
}

const char* to_string(ClassId c) {
    switch (c) {
        case ClassId::D: return "D";
        case ClassId::E: return "E";
        case ClassId::L: return "L";
        case ClassId::S: return "S";
        case ClassId::A: return "A";
        case ClassId::DcapA: return "DcapA";
        default: return "DcapL";
    }
}

// --- class E ---------------------------------------------------------------

namespace {

ClassVerdict e_direct(const DistributionModel& m, const GridSpec& grid,
                      const ClassifierConfig& cfg) {
    const double umax = *std::max_element(cfg.u_grid.begin(), cfg.u_grid.end());
    const GridSpec g = tail_grid(m, grid, umax);
    std::vector<EvidenceItem> ev;
    bool any_member = false, all_pinned = true;
    for (double u : cfg.u_grid) {
        const LimitEstimate est = ratio_limit(m.log_tail, u, g);
        ev.push_back(item("tail_ratio(u=" + fmt(u) + ")", est));
        const bool member_u = est.upper <= 1.0 - cfg.tol && !rising_toward_one(est, cfg);
        any_member = any_member || member_u;
        all_pinned = all_pinned && est.lower >= 1.0 - cfg.tol;
    }
    Verdict v = any_member ? Verdict::Member
                           : (all_pinned ? Verdict::NonMember : Verdict::Inconclusive);
    return make_verdict(ClassId::E, v, "direct", cfg.tol, std::move(ev), g);
}

ClassVerdict e_hazard(const DistributionModel& m, const GridSpec& grid,
                      const ClassifierConfig& cfg) {
    const GridSpec g = hazard_grid(m, grid, 1.0);
    const LimitEstimate est = xh_limits(m, g);
    std::vector<EvidenceItem> ev{item("xh", est)};
    Verdict v = Verdict::Inconclusive;
    if (est.lower >= cfg.tol_m && est.lower >= cfg.drop_frac * est.prev_lower)
        v = Verdict::Member;  // M1 bounded away from 0
    else if (vanishing(est, cfg))
        v = Verdict::NonMember;  // M1 = 0
    return make_verdict(ClassId::E, v, "hazard-M1", cfg.tol_m, std::move(ev), g);
}

}  // namespace

ClassVerdict test_E(const DistributionModel& model, const GridSpec& grid, ERoute route,
                    const ClassifierConfig& cfg) {
    switch (route) {
        case ERoute::Direct: return e_direct(model, grid, cfg);
        case ERoute::HazardM1: return e_hazard(model, grid, cfg);
        default:
            return combine_strict(ClassId::E, e_direct(model, grid, cfg),
                                  e_hazard(model, grid, cfg), cfg.tol, grid);
    }
}

// --- class D ---------------------------------------------------------------

namespace {

ClassVerdict d_direct(const DistributionModel& m, const GridSpec& grid,
                      const ClassifierConfig& cfg) {
    const double umax = *std::max_element(cfg.u_grid.begin(), cfg.u_grid.end());
    const GridSpec g = tail_grid(m, grid, umax);
    std::vector<EvidenceItem> ev;
    bool any_positive = false, all_vanish = true;
    for (double u : cfg.u_grid) {
        const LimitEstimate est = ratio_limit(m.log_tail, u, g);
        ev.push_back(item("tail_ratio(u=" + fmt(u) + ")", est));
        // "for some u" and "for all u" coincide for dominated variation;
        // membership uses the robust small-u witness, non-membership needs
        // every u to decay.
        any_positive = any_positive || stabilized_positive(est, cfg);
        all_vanish = all_vanish && vanishing(est, cfg);
    }
    Verdict v = any_positive ? Verdict::Member
                             : (all_vanish ? Verdict::NonMember : Verdict::Inconclusive);
    return make_verdict(ClassId::D, v, "direct", cfg.tol, std::move(ev), g);
}

ClassVerdict d_hazard(const DistributionModel& m, const GridSpec& grid,
                      const ClassifierConfig& cfg) {
    const GridSpec g = hazard_grid(m, grid, 1.0);
    const LimitEstimate est = xh_limits(m, g);
    std::vector<EvidenceItem> ev{item("xh", est)};
    Verdict v = Verdict::Inconclusive;
    if (bounded_flat(est, cfg))
        v = Verdict::Member;  // M2 < inf
    else if (strongly_growing(est, cfg))
        v = Verdict::NonMember;  // M2 = inf
    return make_verdict(ClassId::D, v, "hazard-M2", cfg.tol_m, std::move(ev), g);
}

}  // namespace

ClassVerdict test_D(const DistributionModel& model, const GridSpec& grid, DRoute route,
                    const ClassifierConfig& cfg) {
    switch (route) {
        case DRoute::Direct: return d_direct(model, grid, cfg);
        case DRoute::HazardM2: return d_hazard(model, grid, cfg);
        default:
            return combine_strict(ClassId::D, d_direct(model, grid, cfg),
                                  d_hazard(model, grid, cfg), cfg.tol, grid);
    }
}

// --- class L ---------------------------------------------------------------

ClassVerdict test_L(const DistributionModel& model, const GridSpec& grid,
                    const ClassifierConfig& cfg) {
    const GridSpec g = tail_grid(model, grid, 1.0);
    std::vector<EvidenceItem> ev;
    bool all_member = true, any_nonmember = false;
    for (double y : cfg.shift_grid) {
        const int first = std::max(0, g.count - 2 * g.window);
        std::vector<double> xs, dev;
        for (int k = first; k < g.count; ++k) {
            const double x = g.point(k);
            if (!(x - y > model.support_low)) continue;
            const double d = model.log_tail(x - y) - model.log_tail(x);
            xs.push_back(x);
            dev.push_back(std::abs(std::exp(std::min(d, 700.0)) - 1.0));
        }
        if (static_cast<int>(xs.size()) < g.window) {
            all_member = false;
            continue;
        }
        const LimitEstimate est = windowed_limit(xs, dev, g);
        ev.push_back(item("shift_dev(y=" + fmt(y) + ")", est));
        // inside the band over the whole window, or entering it from above
        // while decaying window over window
        const bool member_y =
            est.upper <= cfg.tol ||
            (est.lower <= cfg.tol && est.upper <= 0.6 * est.prev_upper);
        const bool nonmember_y =
            est.lower >= 3.0 * cfg.tol && est.lower >= 0.5 * est.prev_lower;
        all_member = all_member && member_y;
        any_nonmember = any_nonmember || nonmember_y;
    }
    Verdict v = any_nonmember ? Verdict::NonMember
                              : (all_member ? Verdict::Member : Verdict::Inconclusive);
    return make_verdict(ClassId::L, v, "shift-ratio", cfg.tol, std::move(ev), g);
}

// --- Pitman criterion and class S -------------------------------------------

double pitman_integral(const DistributionModel& model, double kappa, double x,
                       const QuadratureSpec& quad) {
    if (!(kappa > 0)) throw InvalidParameter("pitman_integral: kappa must be > 0");
    if (!(x > model.support_low)) throw DomainError("pitman_integral: x below support");
    const double hx = hazard(model, x);
    // exp(kappa y h(x) - H(y)) h(y) = f(y) exp(kappa y h(x))
    auto log_integrand = [&](double y) {
        const double s = kappa * y * hx + model.log_density(y);
        if (s > 700.0)
            throw OverflowGuard("pitman_integral: exponent " + fmt(s) + " at y=" + fmt(y));
        return s;
    };
    return integrate_log(log_integrand, model.support_low, x, quad).value;
}

namespace {

struct RouteOutcome {
    ClassVerdict verdict;
    bool hypothesis_gated = false;  // abstained because a hypothesis failed
};

RouteOutcome s_self_convolution(const DistributionModel& m, const GridSpec& grid,
                                const ClassifierConfig& cfg) {
    const ConvolvedModel conv(m, m, cfg.quad);
    const DistributionModel cm = conv.as_model();
    const GridSpec g = tail_grid(cm, grid, 1.0);
    const int first = std::max(0, g.count - 2 * g.window);
    std::vector<double> xs, ratio, dev;
    for (int k = first; k < g.count; ++k) {
        const double x = g.point(k);
        const double rho = std::exp(cm.log_tail(x) - m.log_tail(x));
        xs.push_back(x);
        ratio.push_back(rho);
        dev.push_back(std::abs(rho - 2.0));
    }
    const LimitEstimate est = windowed_limit(xs, ratio, g);
    const LimitEstimate dv = windowed_limit(xs, dev, g);
    std::vector<EvidenceItem> ev{item("self_conv_ratio", est), item("self_conv_dev", dv)};
    Verdict v = Verdict::Inconclusive;
    if (dv.upper <= cfg.tol && dv.upper <= std::max(1.25 * dv.prev_upper, 0.25 * cfg.tol))
        v = Verdict::Member;
    else if (est.lower >= 2.0 + 3.0 * cfg.tol && est.lower >= 1.2 * est.prev_lower)
        v = Verdict::NonMember;  // ratio diverging
    return {make_verdict(ClassId::S, v, "self-convolution", cfg.tol, std::move(ev), g),
            false};
}

RouteOutcome s_pitman(const DistributionModel& m, const GridSpec& grid,
                      const ClassifierConfig& cfg) {
    const double umax = *std::max_element(cfg.index_u_grid.begin(), cfg.index_u_grid.end());
    const GridSpec gh = hazard_grid(m, grid, umax);
    auto log_h = [&](double x) { return m.log_density(x) - m.log_tail(x); };
    IndexEstimate h_idx;
    try {
        h_idx = matuszewska_indices(log_h, gh, cfg.index_u_grid);
    } catch (const DegenerateRatio&) {
        return {make_verdict(ClassId::S, Verdict::Inconclusive, "pitman", cfg.tol, {}, gh,
                             "hazard index degenerate"),
                true};
    }
    std::vector<EvidenceItem> ev{
        item("delta_h", h_idx.delta_infinite ? kInf : h_idx.delta)};
    // The criterion presupposes positive decrease of the hazard; outside
    // that hypothesis it is silent, so the route abstains.
    if (!h_idx.delta_infinite && !(h_idx.delta >= cfg.delta_h_min))
        return {make_verdict(ClassId::S, Verdict::Inconclusive, "pitman", cfg.tol,
                             std::move(ev), gh, "positive decrease not established"),
                true};

    const GridSpec g = hazard_grid(m, grid, 1.0);
    const double x_top = g.point(g.count - 1);

    // The integrand at y = x carries exp(kappa x h(x) - H(x)), so for kappa
    // at or above liminf H(x) / (x h(x)) the integral diverges whether or
    // not the model is subexponential. Only kappa safely below that
    // threshold can falsify membership.
    const LimitEstimate kmax = windowed_of(g, [&](double x) {
        return hazard_function(m, x) / (x * hazard(m, x));
    });
    const double kappa_cap = 0.9 * kmax.lower;
    std::vector<double> usable;
    for (double k : cfg.kappa_grid)
        if (k <= kappa_cap) usable.push_back(k);
    ev.push_back(item("pitman_kappa_cap", kappa_cap));
    if (usable.empty())
        return {make_verdict(ClassId::S, Verdict::Inconclusive, "pitman", cfg.tol,
                             std::move(ev), g,
                             "no kappa below the divergence threshold"),
                true};

    bool all_near_one = true, any_far = false;
    for (double kappa : usable) {
        double val;
        try {
            val = pitman_integral(m, kappa, x_top, cfg.quad);
        } catch (const OverflowGuard& e) {
            ev.push_back(item("pitman(kappa=" + fmt(kappa) + ")", kInf));
            return {make_verdict(ClassId::S, Verdict::Inconclusive, "pitman", cfg.tol,
                                 std::move(ev), g, std::string("overflow guard: ") + e.what()),
                    true};
        }
        ev.push_back(item("pitman(kappa=" + fmt(kappa) + ")", val));
        all_near_one = all_near_one && std::abs(val - 1.0) <= cfg.tol;
        any_far = any_far || std::abs(val - 1.0) >= 3.0 * cfg.tol;
    }
    Verdict v = all_near_one ? Verdict::Member
                             : (any_far ? Verdict::NonMember : Verdict::Inconclusive);
    return {make_verdict(ClassId::S, v, "pitman", cfg.tol, std::move(ev), g), false};
}

}  // namespace

ClassVerdict test_S(const DistributionModel& model, const GridSpec& grid, SRoute route,
                    const ClassifierConfig& cfg) {
    if (route == SRoute::SelfConvolution) return s_self_convolution(model, grid, cfg).verdict;
    if (route == SRoute::Pitman) return s_pitman(model, grid, cfg).verdict;

    const RouteOutcome a = s_self_convolution(model, grid, cfg);
    const RouteOutcome b = s_pitman(model, grid, cfg);
    // A hypothesis-gated abstention does not veto the other route; the
    // criterion simply does not apply there. Decisive disagreement does.
    if (b.hypothesis_gated && a.verdict.verdict != Verdict::Inconclusive) {
        ClassVerdict out = a.verdict;
        out.route = "self-convolution (pitman gated out)";
        out.note = b.verdict.note;
        out.evidence.insert(out.evidence.end(), b.verdict.evidence.begin(),
                            b.verdict.evidence.end());
        return out;
    }
    return combine_strict(ClassId::S, a.verdict, b.verdict, cfg.tol, grid);
}

// --- classes A and D cap A ---------------------------------------------------

namespace {

Verdict conjunction(Verdict a, Verdict b) {
    if (a == Verdict::NonMember || b == Verdict::NonMember) return Verdict::NonMember;
    if (a == Verdict::Member && b == Verdict::Member) return Verdict::Member;
    return Verdict::Inconclusive;
}

}  // namespace

ClassVerdict test_A(const DistributionModel& model, const GridSpec& grid,
                    const ClassifierConfig& cfg) {
    const ClassVerdict s = test_S(model, grid, SRoute::Both, cfg);
    const ClassVerdict e = test_E(model, grid, ERoute::Both, cfg);
    std::vector<EvidenceItem> ev = s.evidence;
    ev.insert(ev.end(), e.evidence.begin(), e.evidence.end());
    std::string note;
    if (!s.note.empty()) note += "S: " + s.note;
    if (!e.note.empty()) note += (note.empty() ? "" : "; ") + ("E: " + e.note);
    return make_verdict(ClassId::A, conjunction(s.verdict, e.verdict), "S-and-E", cfg.tol,
                        std::move(ev), grid, note);
}

ClassVerdict test_DcapA(const DistributionModel& model, const GridSpec& grid,
                        const ClassifierConfig& cfg) {
    // (i) membership of both D and A
    const ClassVerdict d = test_D(model, grid, DRoute::Both, cfg);
    const ClassVerdict a = test_A(model, grid, cfg);
    const Verdict r1 = conjunction(d.verdict, a.verdict);

    // (ii) 0 < M1 <= M2 < inf
    const GridSpec gh = hazard_grid(model, grid, 1.0);
    const LimitEstimate xh = xh_limits(model, gh);
    Verdict r2 = Verdict::Inconclusive;
    if (xh.lower >= cfg.tol_m && xh.lower >= cfg.drop_frac * xh.prev_lower &&
        bounded_flat(xh, cfg))
        r2 = Verdict::Member;
    else if (vanishing(xh, cfg) || strongly_growing(xh, cfg))
        r2 = Verdict::NonMember;

    // (iii) 0 < F_*(u) <= F*(u) < 1 for all u
    const double umax = *std::max_element(cfg.u_grid.begin(), cfg.u_grid.end());
    const GridSpec gt = tail_grid(model, grid, umax);
    std::vector<EvidenceItem> ratio_ev;
    bool all_ok = true, any_bad = false;
    for (double u : cfg.u_grid) {
        const LimitEstimate est = ratio_limit(model.log_tail, u, gt);
        ratio_ev.push_back(item("tail_ratio(u=" + fmt(u) + ")", est));
        const bool ok_u = stabilized_positive(est, cfg) && est.upper <= 1.0 - cfg.tol &&
                          !rising_toward_one(est, cfg);
        const bool bad_u = vanishing(est, cfg) || est.lower >= 1.0 - cfg.tol;
        all_ok = all_ok && ok_u;
        any_bad = any_bad || bad_u;
    }
    const Verdict r3 = all_ok ? Verdict::Member
                              : (any_bad ? Verdict::NonMember : Verdict::Inconclusive);

    std::vector<EvidenceItem> ev;
    ev.push_back(item("route1(D,A)", r1 == Verdict::Member ? 1.0
                                     : r1 == Verdict::NonMember ? 0.0 : 0.5));
    ev.push_back(item("xh", xh));
    ev.insert(ev.end(), ratio_ev.begin(), ratio_ev.end());
    ev.insert(ev.end(), d.evidence.begin(), d.evidence.end());
    ev.insert(ev.end(), a.evidence.begin(), a.evidence.end());

    Verdict v = Verdict::Inconclusive;
    std::string note;
    if (r1 == r2 && r2 == r3 && r1 != Verdict::Inconclusive) {
        v = r1;
    } else {
        note = "characterizations disagree: (i) " + std::string(to_string(r1)) + ", (ii) " +
               to_string(r2) + ", (iii) " + to_string(r3);
    }
    return make_verdict(ClassId::DcapA, v, "three-characterizations", cfg.tol,
                        std::move(ev), grid, note);
}

// --- hazard-rate bounds ------------------------------------------------------

BoundCheck check_hazard_lower_bound(const DistributionModel& model, double delta,
                              const GridSpec& grid, const ClassifierConfig& cfg) {
    BoundCheck out;
    out.bound = BoundName::HazardLower;
    out.exponent = delta;
    out.lambda = std::numeric_limits<double>::quiet_NaN();

    const GridSpec gh = hazard_grid(model, grid, 1.0);
    const double umax = *std::max_element(cfg.index_u_grid.begin(), cfg.index_u_grid.end());
    const IndexEstimate f_idx =
        matuszewska_indices(model.log_density, hazard_grid(model, grid, umax),
                            cfg.index_u_grid);
    out.hypothesis_ok = delta > 1.0 && (f_idx.delta_infinite || delta < f_idx.delta);
    if (delta <= 1.0) {
        out.rhs = 0.0;
        out.holds = true;  // vacuous: every hazard is nonnegative
        out.note = "hypothesis violated: delta <= 1, bound vacuous";
        out.observed = xh_limits(model, gh);
        return out;
    }
    out.fit = fit_potter(model.log_density, delta, PotterDirection::UpperBound, gh);
    out.rhs = (delta - 1.0) / out.fit.C;
    out.observed = xh_limits(model, gh);
    bool holds = true;
    for (int k = 0; k < gh.count; ++k) {
        const double x = gh.point(k);
        if (x < out.fit.x0 * (1.0 - 1e-12)) continue;
        if (!(x * hazard(model, x) >= out.rhs * (1.0 - 1e-9))) { holds = false; break; }
    }
    out.holds = holds;
    if (!out.hypothesis_ok) out.note = "hypothesis violated: delta outside (1, delta_f)";
    return out;
}

double potter_hazard_bound_v(double lambda, double gamma) {
    if (!(lambda > 1.0)) throw InvalidParameter("V(lambda, gamma): lambda must be > 1");
    if (std::abs(gamma - 1.0) < 1e-12) return std::log(lambda);
    return (std::pow(lambda, 1.0 - gamma) - 1.0) / (1.0 - gamma);
}

BoundCheck check_hazard_upper_bound(const DistributionModel& model, double gamma, double lambda,
                              const GridSpec& grid, const ClassifierConfig& cfg) {
    BoundCheck out;
    out.bound = BoundName::HazardUpper;
    out.exponent = gamma;
    out.lambda = lambda;

    const GridSpec gh = hazard_grid(model, grid, 1.0);
    const double umax = *std::max_element(cfg.index_u_grid.begin(), cfg.index_u_grid.end());
    const IndexEstimate f_idx =
        matuszewska_indices(model.log_density, hazard_grid(model, grid, umax),
                            cfg.index_u_grid);
    out.hypothesis_ok = !f_idx.gamma_infinite && gamma > f_idx.gamma;
    if (!out.hypothesis_ok) out.note = "hypothesis violated: gamma not above gamma_f";

    out.fit = fit_potter(model.log_density, gamma, PotterDirection::LowerBound, gh);
    const double v = potter_hazard_bound_v(lambda, gamma);
    // 1/h(x) = int_x^inf f(y)/f(x) dy >= int_x^{lambda x} >= C' x V(lambda, gamma)
    out.rhs = 1.0 / (out.fit.C * v);
    out.observed = xh_limits(model, gh);
    bool holds = true;
    for (int k = 0; k < gh.count; ++k) {
        const double x = gh.point(k);
        if (x < out.fit.x0 * (1.0 - 1e-12)) continue;
        if (!(x * hazard(model, x) <= out.rhs * (1.0 + 1e-9))) { holds = false; break; }
    }
    out.holds = holds;
    return out;
}

// --- convolution-closure flow ------------------------------------------------

ClosurePreconditions check_closure_preconditions(const DistributionModel& left,
                                                     const DistributionModel& right,
                                                     const GridSpec& grid,
                                                     const ClassifierConfig& cfg) {
    ClosurePreconditions pre;
    const double umax = *std::max_element(cfg.index_u_grid.begin(), cfg.index_u_grid.end());
    pre.f1_idx = matuszewska_indices(left.log_density, hazard_grid(left, grid, umax),
                                     cfg.index_u_grid);
    pre.tail1_idx =
        matuszewska_indices(left.log_tail, tail_grid(left, grid, umax), cfg.index_u_grid);
    pre.tail2_idx =
        matuszewska_indices(right.log_tail, tail_grid(right, grid, umax), cfg.index_u_grid);

    pre.density_ok = pre.f1_idx.delta_infinite || pre.f1_idx.delta > cfg.delta_h_min;
    pre.ordering_ok = !pre.tail1_idx.delta_infinite &&
                      (pre.tail2_idx.delta_infinite ||
                       pre.tail1_idx.delta < pre.tail2_idx.delta);

    pre.witness_delta = std::numeric_limits<double>::quiet_NaN();
    if (pre.density_ok && pre.ordering_ok) {
        const double d1 = pre.tail1_idx.delta;
        const double span = pre.tail2_idx.delta_infinite ? std::max(d1, 1.0)
                                                         : pre.tail2_idx.delta - d1;
        const GridSpec g = tail_grid(left, grid, 1.0);
        for (int j = 0; j < 16 && !pre.witness_found; ++j) {
            const double delta = d1 + span * j / 16.0;
            const LimitEstimate est = windowed_of(g, [&](double x) {
                return std::exp(std::min(700.0, delta * std::log(x) + left.log_tail(x)));
            });
            if (est.lower >= cfg.tol && est.lower >= cfg.drop_frac * est.prev_lower) {
                pre.witness_found = true;
                pre.witness_delta = delta;
                pre.witness_liminf = est;
            }
        }
    }
    pre.satisfied = pre.density_ok && pre.ordering_ok && pre.witness_found;
    return pre;
}

ClosureVerdict verify_convolution_closure(const DistributionModel& left,
                                  const DistributionModel& right, const GridSpec& grid,
                                  const QuadratureSpec& quad, const ClassifierConfig& cfg) {
    ClassifierConfig cc = cfg;
    cc.quad = quad;

    ClosureVerdict out;
    out.pre = check_closure_preconditions(left, right, grid, cc);

    const ConvolvedModel conv(left, right, quad);
    const DistributionModel cm = conv.as_model();
    out.conv_E = test_E(cm, grid, ERoute::Both, cc);

    const double umax = *std::max_element(cc.index_u_grid.begin(), cc.index_u_grid.end());
    out.conv_tail_idx =
        matuszewska_indices(cm.log_tail, tail_grid(cm, grid, umax), cc.index_u_grid);

    const GridSpec gm = tail_grid(cm, grid, 1.0);
    out.max_sum = windowed_of(gm, [&](double x) { return max_sum_ratio(left, right, x, quad); });
    out.max_sum_to_one = std::abs(out.max_sum.upper - 1.0) <= 0.05 &&
                         std::abs(out.max_sum.lower - 1.0) <= 0.05;

    out.left_DcapA = test_DcapA(left, grid, cc);
    out.right_DcapA = test_DcapA(right, grid, cc);
    if (out.left_DcapA.verdict == Verdict::Member &&
        out.right_DcapA.verdict == Verdict::Member)
        out.conv_DcapA = test_DcapA(cm, grid, cc);
    return out;
}

Classification classify_all(const DistributionModel& model, const GridSpec& grid,
                            const ClassifierConfig& cfg) {
    Classification c;
    c.d = test_D(model, grid, DRoute::Both, cfg);
    c.e = test_E(model, grid, ERoute::Both, cfg);
    c.l = test_L(model, grid, cfg);
    c.s = test_S(model, grid, SRoute::Both, cfg);
    c.a = test_A(model, grid, cfg);
    c.dcap_a = test_DcapA(model, grid, cfg);

    const double umax = *std::max_element(cfg.index_u_grid.begin(), cfg.index_u_grid.end());
    c.tail_idx = matuszewska_indices(model.log_tail, tail_grid(model, grid, umax),
                                     cfg.index_u_grid);
    c.density_idx = matuszewska_indices(model.log_density, hazard_grid(model, grid, umax),
                                        cfg.index_u_grid);
    auto log_h = [&](double x) { return model.log_density(x) - model.log_tail(x); };
    c.hazard_idx =
        matuszewska_indices(log_h, hazard_grid(model, grid, umax), cfg.index_u_grid);
    c.xh = xh_limits(model, hazard_grid(model, grid, 1.0));
    c.xh_unbounded = strongly_growing(c.xh, cfg);
    return c;
}

}  // namespace tailclass
