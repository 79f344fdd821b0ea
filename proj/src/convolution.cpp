#include "tailclass/convolution.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <unordered_map>

#include "tailclass/errors.hpp"

namespace tailclass {

double convolve_density(const DistributionModel& left, const DistributionModel& right,
                        double x, const QuadratureSpec& quad) {
    const double a = left.support_low;
    const double b = x - right.support_low;
    if (!(b > a)) return 0.0;
    // Split at the midpoint and parametrize each half from its own support
    // edge: y - support stays exact near the edge, while x - y would round
    // the small distance away and clip singular densities there.
    const double mid = 0.5 * (a + b);
    auto half = [&](const DistributionModel& near, const DistributionModel& far,
                    double lo, double hi) {
        auto log_integrand = [&](double y) {
            return near.log_density(y) + far.log_density(x - y);
        };
        return integrate_log(log_integrand, lo, hi, quad).value;
    };
    return half(left, right, a, mid) + half(right, left, right.support_low, x - mid);
}

double convolution_tail(const DistributionModel& left, const DistributionModel& right,
                        double x, const QuadratureSpec& quad) {
    const double s1 = left.support_low, s2 = right.support_low;
    if (x <= s1 + s2) return 0.0;
    const double head = std::exp(right.log_tail(x - s1));
    double integral = 0.0;
    if (x - s1 > s2) {
        auto log_integrand = [&](double y) {
            return left.log_tail(x - y) + right.log_density(y);
        };
        integral = integrate_log(log_integrand, s2, x - s1, quad).value;
    }
    const double tail = head + integral;
    if (!(tail > 0.0)) return -std::numeric_limits<double>::infinity();
    return std::min(0.0, std::log(tail));
}

double self_convolution_ratio(const DistributionModel& model, double x,
                              const QuadratureSpec& quad) {
    const double lt2 = convolution_tail(model, model, x, quad);
    const double lt = model.log_tail(x);
    return std::exp(lt2 - lt);
}

double max_sum_ratio(const DistributionModel& left, const DistributionModel& right,
                     double x, const QuadratureSpec& quad) {
    const double lt = convolution_tail(left, right, x, quad);
    const double l1 = left.log_tail(x), l2 = right.log_tail(x);
    const double off = std::max(l1, l2);
    return std::exp(lt - off) / (std::exp(l1 - off) + std::exp(l2 - off));
}

double convolution_hazard(const DistributionModel& left, const DistributionModel& right,
                          double x, const QuadratureSpec& quad) {
    const double dens = convolve_density(left, right, x, quad);
    const double lt = convolution_tail(left, right, x, quad);
    const double h = dens * std::exp(-lt);
    if (!std::isfinite(h))
        throw DomainError("convolution_hazard: not finite at x=" + std::to_string(x));
    return h;
}

struct ConvolvedModel::State {
    DistributionModel left, right;
    QuadratureSpec quad;
    double support;
    mutable std::mutex mu;
    mutable std::unordered_map<double, double> tail_memo, density_memo;

    double cached(std::unordered_map<double, double>& memo, double x,
                  double (*compute)(const State&, double)) const {
        {
            std::lock_guard lock(mu);
            auto it = memo.find(x);
            if (it != memo.end()) return it->second;
        }
        // Computed outside the lock; a concurrent duplicate lands on the
        // same value (pure function of x).
        const double v = compute(*this, x);
        std::lock_guard lock(mu);
        memo.emplace(x, v);
        return v;
    }

    static double tail_at(const State& s, double x) {
        return convolution_tail(s.left, s.right, x, s.quad);
    }
    static double density_at(const State& s, double x) {
        const double d = convolve_density(s.left, s.right, x, s.quad);
        return d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity();
    }
};

ConvolvedModel::ConvolvedModel(DistributionModel left, DistributionModel right,
                               QuadratureSpec quad)
    : state_(std::make_shared<State>()) {
    state_->support = left.support_low + right.support_low;
    state_->left = std::move(left);
    state_->right = std::move(right);
    state_->quad = quad;
}

double ConvolvedModel::support_low() const { return state_->support; }

double ConvolvedModel::log_tail(double x) const {
    if (x <= state_->support) return 0.0;
    return state_->cached(state_->tail_memo, x, &State::tail_at);
}

double ConvolvedModel::log_density(double x) const {
    return state_->cached(state_->density_memo, x, &State::density_at);
}

const DistributionModel& ConvolvedModel::left() const { return state_->left; }
const DistributionModel& ConvolvedModel::right() const { return state_->right; }
const QuadratureSpec& ConvolvedModel::quad() const { return state_->quad; }

DistributionModel ConvolvedModel::as_model() const {
    auto self = *this;  // shares state_
    return DistributionModel{
        state_->support,
        [self](double x) { return self.log_density(x); },
        [self](double x) { return self.log_tail(x); },
        "conv[" + state_->left.label + " * " + state_->right.label + "]"};
}

}  // namespace tailclass
