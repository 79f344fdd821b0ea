#include <doctest.h>

#include <cmath>

#include "tailclass/errors.hpp"
#include "tailclass/quadrature.hpp"

using namespace tailclass;

TEST_CASE("polynomial integral is near exact") {
    auto lf = [](double x) { return 3.0 * std::log(x); };
    const auto r = integrate_log(lf, 0.0, 1.0, QuadratureSpec{});
    CHECK(r.value == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("gaussian mass") {
    auto lf = [](double x) { return -0.5 * x * x - 0.5 * std::log(2.0 * M_PI); };
    const auto r = integrate_log(lf, -8.0, 8.0, QuadratureSpec{});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inverse square root edge singularity") {
    auto lf = [](double x) { return -0.5 * std::log(x); };
    const auto r = integrate_log(lf, 0.0, 1.0, QuadratureSpec{});
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("two-sided singularity integrates to pi") {
    // int_0^1 (x(1-x))^{-1/2} dx = pi, split at 1/2 so each edge distance
    // is measured exactly (the pattern the convolution callers use)
    auto lf = [](double x) { return -0.5 * std::log(x) - 0.5 * std::log(1.0 - x); };
    const auto r = integrate_log(lf, 0.0, 0.5, QuadratureSpec{});
    CHECK(2.0 * r.value == doctest::Approx(M_PI).epsilon(1e-8));
}

TEST_CASE("narrow spike near the left end of a huge interval") {
    auto lf = [](double x) { return -0.5 * (x - 5.0) * (x - 5.0); };
    const auto r = integrate_log(lf, 0.0, 1e6, QuadratureSpec{});
    // the range truncates the gaussian at 5 sigma below the mode
    const double want = std::sqrt(2.0 * M_PI) * (1.0 - 0.5 * std::erfc(5.0 / std::sqrt(2.0)));
    CHECK(r.value == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("narrow spike near the right end of a huge interval") {
    auto lf = [](double x) { return -0.5 * (x - 999990.0) * (x - 999990.0); };
    const auto r = integrate_log(lf, 0.0, 1e6, QuadratureSpec{});
    CHECK(r.value == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-9));
}

TEST_CASE("underflowing integrand contributes zero, not NaN") {
    auto lf = [](double x) { return -2000.0 - x; };
    const auto r = integrate_log(lf, 0.0, 10.0, QuadratureSpec{});
    CHECK(r.value == 0.0);
    CHECK(r.claimed_error == 0.0);
}

TEST_CASE("degenerate interval") {
    auto lf = [](double) { return 0.0; };
    CHECK(integrate_log(lf, 2.0, 2.0, QuadratureSpec{}).value == 0.0);
    CHECK(integrate_log(lf, 3.0, 2.0, QuadratureSpec{}).value == 0.0);
}

TEST_CASE("depth exhaustion reports failure") {
    // x^-0.9 stays singular even after the sqrt edge substitution; two
    // levels of bisection cannot reach the tolerance.
    auto lf = [](double x) { return -0.9 * std::log(x); };
    QuadratureSpec q;
    q.max_depth = 2;
    q.abs_tol = 1e-300;
    q.rel_tol = 1e-15;
    CHECK_THROWS_AS(integrate_log(lf, 0.0, 1.0, q), QuadratureFailure);
}

TEST_CASE("claimed error bounds the actual error on a smooth case") {
    auto lf = [](double x) { return std::log(std::cos(x) + 2.0); };
    const auto r = integrate_log(lf, 0.0, 10.0, QuadratureSpec{});
    // int (cos x + 2) = sin 10 + 20
    const double truth = std::sin(10.0) + 20.0;
    CHECK(std::abs(r.value - truth) <= std::max(r.claimed_error, 1e-12));
}
