#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bpsi/quadrature.hpp"

using namespace bpsi;

TEST_CASE("smooth integrands to tolerance") {
    const auto r = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));

    const auto e = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
    CHECK(e.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("graded pieces handle a kink at the origin") {
    const auto breaks = graded_breaks(1.0, 40);
    CHECK(breaks.front() == 0.0);
    CHECK(breaks.back() == 1.0);
    CHECK(breaks.size() == 42);
    CHECK(breaks[1] == doctest::Approx(std::ldexp(1.0, -40)));
    // the lag integrand tau^{1 - theta} for theta = 1/2
    const auto r = integrate_pieces([](double t) { return std::sqrt(t); }, breaks);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0 / 3).epsilon(1e-11));
}

TEST_CASE("empty and reversed pieces") {
    const double breaks[] = {0.0, 0.0, 0.5, 0.5, 1.0};
    const auto r = integrate_pieces([](double x) { return 3 * x * x; }, breaks);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(integrate([](double) { return 1.0; }, 1.0, 1.0).value == 0.0);
}

TEST_CASE("nonconvergence is reported, not hidden") {
    QuadratureOptions tight;
    tight.max_depth = 2;
    tight.abs_tol = 1e-15;
    tight.rel_tol = 1e-15;
    const auto r = integrate([](double x) { return std::abs(std::sin(50 * x)); }, 0.0, 1.0, tight);
    CHECK_FALSE(r.converged);
}
