#include "tailclass/families.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tailclass {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln sqrt(2 pi)

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidParameter(what);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

double hazard(const DistributionModel& model, double x) {
    if (!(x > model.support_low))
        throw DomainError("hazard: x <= support_low for " + model.label);
    const double h = std::exp(model.log_density(x) - model.log_tail(x));
    if (!std::isfinite(h))
        throw DomainError("hazard: not finite at x=" + fmt(x) + " for " + model.label);
    return h;
}

double hazard_function(const DistributionModel& model, double x) {
    if (!(x >= model.support_low))
        throw DomainError("hazard_function: x < support_low for " + model.label);
    return -model.log_tail(x);
}

double log_erfc(double t) {
    if (t < 25.0) return std::log(std::erfc(t));
    // Asymptotic expansion erfc(t) ~ exp(-t^2)/(t sqrt(pi)) sum (-1)^k (2k-1)!!/(2t^2)^k.
    // At t = 25 the truncation error is below 1e-13.
    const double inv2t2 = 1.0 / (2.0 * t * t);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2 * k - 1) * inv2t2;
        sum += term;
    }
    return -t * t - std::log(t) - 0.5 * std::log(M_PI) + std::log(sum);
}

namespace {

DistributionModel build_pareto(const ParetoSpec& s) {
    require(s.a > 0, "pareto requires a > 0");
    const double a = s.a;
    return DistributionModel{
        1.0,
        [a](double x) {
            if (x <= 1.0) return -std::numeric_limits<double>::infinity();
            return std::log(a) - (a + 1.0) * std::log(x);
        },
        [a](double x) { return x <= 1.0 ? 0.0 : -a * std::log(x); },
        "pareto(a=" + fmt(a) + ")"};
}

DistributionModel build_exponential(const ExponentialSpec& s) {
    require(s.rate > 0, "exponential requires rate > 0");
    const double r = s.rate;
    return DistributionModel{
        0.0,
        [r](double x) {
            if (x <= 0.0) return -std::numeric_limits<double>::infinity();
            return std::log(r) - r * x;
        },
        [r](double x) { return x <= 0.0 ? 0.0 : -r * x; },
        "exp(rate=" + fmt(r) + ")"};
}

DistributionModel build_weibull(const WeibullSpec& s) {
    require(s.shape > 0, "weibull requires shape > 0");
    require(s.scale > 0, "weibull requires scale > 0");
    const double b = s.shape, sc = s.scale;
    return DistributionModel{
        0.0,
        [b, sc](double x) {
            if (x <= 0.0) return -std::numeric_limits<double>::infinity();
            const double t = std::log(x / sc);
            return std::log(b / sc) + (b - 1.0) * t - std::exp(b * t);
        },
        [b, sc](double x) {
            return x <= 0.0 ? 0.0 : -std::exp(b * std::log(x / sc));
        },
        "weibull(shape=" + fmt(b) + ",scale=" + fmt(sc) + ")"};
}

DistributionModel build_lognormal(const LognormalSpec& s) {
    require(s.sigma > 0, "lognormal requires sigma > 0");
    const double mu = s.mu, sg = s.sigma;
    return DistributionModel{
        0.0,
        [mu, sg](double x) {
            if (x <= 0.0) return -std::numeric_limits<double>::infinity();
            const double z = (std::log(x) - mu) / sg;
            return -std::log(x) - std::log(sg) - kLogSqrt2Pi - 0.5 * z * z;
        },
        [mu, sg](double x) {
            if (x <= 0.0) return 0.0;
            const double z = (std::log(x) - mu) / sg;
            return std::log(0.5) + log_erfc(z / std::sqrt(2.0));
        },
        "lognormal(mu=" + fmt(mu) + ",sigma=" + fmt(sg) + ")"};
}

DistributionModel build_burr(const BurrSpec& s) {
    require(s.c > 0 && s.k > 0, "burr requires c, k > 0");
    const double c = s.c, k = s.k;
    // log1p(x^c) switched to c ln x once x^c overflows; the two agree to
    // e^-700 at the crossover.
    auto log1p_xc = [c](double x) {
        const double t = c * std::log(x);
        return t > 700.0 ? t : std::log1p(std::exp(t));
    };
    return DistributionModel{
        0.0,
        [c, k, log1p_xc](double x) {
            if (x <= 0.0) return -std::numeric_limits<double>::infinity();
            return std::log(c * k) + (c - 1.0) * std::log(x) - (k + 1.0) * log1p_xc(x);
        },
        [k, log1p_xc](double x) { return x <= 0.0 ? 0.0 : -k * log1p_xc(x); },
        "burr(c=" + fmt(c) + ",k=" + fmt(k) + ")"};
}

DistributionModel build_lpp(const LogPerturbedParetoSpec& s) {
    require(s.a > 0, "logppareto requires a > 0");
    require(s.a >= std::abs(s.p), "logppareto requires a >= |p| (monotone tail)");
    const double a = s.a, p = s.p;
    return DistributionModel{
        1.0,
        [a, p](double x) {
            if (x <= 1.0) return -std::numeric_limits<double>::infinity();
            const double t = std::log(x);
            // f = (a - p cos ln x) x^-(a+1) exp(p sin ln x)
            return std::log(a - p * std::cos(t)) - (a + 1.0) * t + p * std::sin(t);
        },
        [a, p](double x) {
            if (x <= 1.0) return 0.0;
            const double t = std::log(x);
            return -a * t + p * std::sin(t);
        },
        "logppareto(a=" + fmt(a) + ",p=" + fmt(p) + ")"};
}

}  // namespace

DistributionModel build(const FamilySpec& spec) {
    return std::visit(
        [](const auto& s) -> DistributionModel {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ParetoSpec>) return build_pareto(s);
            else if constexpr (std::is_same_v<T, ExponentialSpec>) return build_exponential(s);
            else if constexpr (std::is_same_v<T, WeibullSpec>) return build_weibull(s);
            else if constexpr (std::is_same_v<T, LognormalSpec>) return build_lognormal(s);
            else if constexpr (std::is_same_v<T, BurrSpec>) return build_burr(s);
            else return build_lpp(s);
        },
        spec);
}

double support_low_of(const FamilySpec& spec) {
    if (std::holds_alternative<ParetoSpec>(spec) ||
        std::holds_alternative<LogPerturbedParetoSpec>(spec))
        return 1.0;
    return 0.0;
}

std::string label_of(const FamilySpec& spec) { return build(spec).label; }

}  // namespace tailclass
