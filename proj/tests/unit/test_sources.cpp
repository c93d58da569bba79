#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "bpsi/errors.hpp"
#include "bpsi/sources.hpp"

using namespace bpsi;

TEST_CASE("catalog evaluation") {
    CHECK(eval_psi(TemporalSource::constant(1.0, 1.0), 0.3) == 1.0);
    CHECK(eval_psi(TemporalSource::power_singular(0.5, 1.0, 0.0, 1.0), 0.75) ==
          doctest::Approx(2.0).epsilon(1e-15));
    CHECK(eval_psi(TemporalSource::affine(1.0, -3.0, 1.0), 1.0) == doctest::Approx(-2.0));
    const auto table = TemporalSource::sampled({0.0, 0.5, 1.0}, {1.0, 3.0, 2.0});
    CHECK(table(0.25) == doctest::Approx(2.0));
    CHECK(table(0.75) == doctest::Approx(2.5));
    CHECK(table(1.0) == doctest::Approx(2.0));
}

TEST_CASE("evaluation domain errors") {
    const auto c = TemporalSource::constant(1.0, 1.0);
    CHECK_THROWS_AS(c(-0.1), DomainError);
    CHECK_THROWS_AS(c(1.1), DomainError);
    CHECK_NOTHROW(c(1.0));
    const auto p = TemporalSource::power_singular(0.5, 1.0, 0.0, 1.0);
    CHECK_THROWS_AS(p(1.0), SingularityError);
    CHECK_THROWS_AS(TemporalSource::power_singular(1.0, 1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(TemporalSource::constant(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(TemporalSource::sampled({0.0, 0.0, 1.0}, {1, 2, 3}), DomainError);
    CHECK_THROWS_AS(TemporalSource::sampled({0.1, 1.0}, {1, 2}), DomainError);
    CHECK_THROWS_AS(TemporalSource::sampled({0.0}, {1}), ShapeError);
}

TEST_CASE("metadata of the catalog") {
    const auto c = TemporalSource::constant(2.0, 1.0);
    CHECK(c.theta() == 0.0);
    CHECK(c.p_T() == 2.0);
    CHECK_FALSE(c.is_singular());
    const auto a = TemporalSource::affine(1.0, -3.0, 1.0);
    CHECK(a.p_T() == doctest::Approx(-2.0));
    CHECK(a.bound_P() >= 2.0);
    const auto p = TemporalSource::power_singular(0.5, 1.5, 0.2, 1.0);
    CHECK(p.theta() == 0.5);
    CHECK(p.p_T() == 1.5);
    CHECK(p.is_singular());
}

TEST_CASE("property: tau^theta psi(T - tau) tends to p_T and stays below P") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> th(-0.5, 0.95);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> horizon(0.5, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double theta = th(rng);
        const double b0 = coef(rng);
        const double xi = coef(rng);
        const double T = horizon(rng);
        const auto p = TemporalSource::power_singular(theta, b0, xi, T);
        for (double tau = T; tau > 1e-12; tau *= 0.37) {
            const double scaled = std::pow(tau, theta) * p.at_lag(tau);
            CHECK(std::abs(scaled) <= p.bound_P() * (1 + 1e-12));
        }
        const double tau = 1e-10;
        CHECK(std::pow(tau, theta) * p.at_lag(tau) ==
              doctest::Approx(p.p_T()).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("L1 distance examples") {
    const auto one = TemporalSource::constant(1.0, 1.0);
    CHECK(l1_distance(one, TemporalSource::constant(1.01, 1.0)) ==
          doctest::Approx(0.01).epsilon(1e-10));
    CHECK(l1_distance(one, one) == 0.0);
    CHECK(l1_distance(one, TemporalSource::affine(1.0, -3.0, 1.0)) ==
          doctest::Approx(1.5).epsilon(1e-10));
    CHECK_THROWS_AS(l1_distance(one, TemporalSource::constant(1.0, 2.0)), ConfigError);
}

TEST_CASE("L1 norms, including singular and sign-changing sources") {
    CHECK(l1_norm(TemporalSource::power_singular(0.5, 1.0, 0.0, 1.0)) ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(l1_norm(TemporalSource::power_singular(0.9, 1.0, 0.0, 1.0)) ==
          doctest::Approx(10.0).epsilon(1e-8));
    // \int_0^1 |1 - 3s| ds = 1/6 + 2/3
    CHECK(l1_norm(TemporalSource::affine(1.0, -3.0, 1.0)) == doctest::Approx(5.0 / 6).epsilon(1e-10));
}

TEST_CASE("property: L1 distance is a metric on the catalog") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    auto draw = [&]() {
        switch (rng() % 3) {
            case 0: return TemporalSource::constant(coef(rng), 1.0);
            case 1: return TemporalSource::affine(coef(rng), coef(rng), 1.0);
            default: return TemporalSource::power_singular(0.4, coef(rng), coef(rng), 1.0);
        }
    };
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = draw();
        const auto b = draw();
        const auto c = draw();
        const double ab = l1_distance(a, b);
        const double ba = l1_distance(b, a);
        CHECK(ab >= 0.0);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-10));
        CHECK(l1_distance(a, c) <= ab + l1_distance(b, c) + 1e-10);
    }
}

TEST_CASE("offsets perturb the source piecewise") {
    const auto one = TemporalSource::constant(1.0, 1.0);
    const auto noisy = one.with_offsets({0.1, -0.2, 0.3, -0.4});
    CHECK(noisy(0.1) == doctest::Approx(1.1));
    CHECK(noisy(0.3) == doctest::Approx(0.8));
    CHECK(noisy(0.6) == doctest::Approx(1.3));
    CHECK(noisy(0.9) == doctest::Approx(0.6));
    CHECK(l1_distance(one, noisy) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("sampled table from CSV") {
    const auto dir = std::filesystem::temp_directory_path() / "bpsi_sources_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "psi.csv";
    {
        std::ofstream out(path);
        out << "t,value\n0,1\n0.5,2\n1,0\n";
    }
    const auto psi = TemporalSource::from_csv(path);
    CHECK(psi.kind() == PsiKind::sampled);
    CHECK(psi.horizon() == 1.0);
    CHECK(psi(0.25) == doctest::Approx(1.5));
    CHECK(psi.theta() == 0.0);
    {
        std::ofstream out(path);
        out << "t,value\n0,1\n0.5,oops\n";
    }
    CHECK_THROWS_AS(TemporalSource::from_csv(path), IoError);
    CHECK_THROWS_AS(TemporalSource::from_csv(dir / "missing.csv"), IoError);
}

TEST_CASE("spatial source specs") {
    const auto f = SpatialSourceSpec::gaussian(2.0, 0.5, 1.0, 2.0);
    CHECK(f(1.0) == 2.0);
    CHECK(f(1.5) == doctest::Approx(2.0 * std::exp(-1.0)));
    CHECK(f.gamma() == 2.0);
    const auto g = make_grid(-1, 1, 8);
    const auto s = SpatialSourceSpec::sampled(f.sample(g), g, 1.0);
    CHECK(s.sample(g) == f.sample(g));
    CHECK_THROWS_AS(s.sample(make_grid(-1, 1, 16)), ShapeError);
}
