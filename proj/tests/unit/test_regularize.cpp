#include <doctest.h>

#include <cmath>
#include <random>

#include "bpsi/errors.hpp"
#include "bpsi/forward.hpp"
#include "bpsi/metrics.hpp"
#include "bpsi/perturb.hpp"
#include "bpsi/regularize.hpp"
#include "test_support.hpp"

using namespace bpsi;

namespace {

struct Setup {
    SpatialGrid grid = make_grid(-10, 10, 1024);
    TemporalSource psi = TemporalSource::constant(1.0, 1.0);
    KernelProfile profile = build_profile(psi, grid, 1.0);
    std::vector<double> f = testing::gaussian_samples(grid);
    std::vector<double> h = apply_forward(f, profile, grid);
};

const Setup& setup() {
    static const Setup s;
    return s;
}

}  // namespace

TEST_CASE("effective b and the alpha rule") {
    RegularizationConfig cfg;
    CHECK(effective_b(cfg) == 0.25);
    CHECK(select_alpha(1e-2, cfg).alpha == doctest::Approx(std::pow(1e-2, 0.8)).epsilon(1e-14));
    CHECK(select_alpha(1e-2, cfg).exponent == doctest::Approx(0.8));
    CHECK(theoretical_rate_exponent(cfg) == doctest::Approx(0.2));

    RegularizationConfig wide;
    wide.beta = 4.0;
    wide.gamma = 1.0;
    CHECK(effective_b(wide) == 0.25);

    RegularizationConfig half;
    half.beta = 4.0;  // level term 1, smoothness term 0.5
    CHECK(effective_b(half) == 0.5);
    CHECK(select_alpha(1e-3, half).alpha == doctest::Approx(1e-2).epsilon(1e-12));

    RegularizationConfig one;
    one.beta = 8.0;
    one.gamma = 4.0;  // terms 2 and 1
    CHECK(effective_b(one) == 1.0);
    CHECK(select_alpha(1e-4, one).alpha == doctest::Approx(1e-2).epsilon(1e-12));

    RegularizationConfig degenerate;
    degenerate.s = 2.0;
    degenerate.gamma = 2.0;
    CHECK(effective_b(degenerate) == 0.0);
    CHECK_THROWS_AS(select_alpha(1e-3, degenerate), ConfigError);
    CHECK_THROWS_AS(select_alpha(0.0, cfg), ConfigError);
    CHECK_THROWS_AS(select_alpha(-1.0, cfg), ConfigError);
}

TEST_CASE("alpha rule convergence conditions") {
    RegularizationConfig cfg;
    auto choice = select_alpha(1e-3, cfg);
    CHECK(choice.convergence_conditions_hold);
    CHECK(choice.warning.empty());

    // small sigma with positive s: eps / alpha^{1 + s/(2 sigma)} grows
    RegularizationConfig rough;
    rough.s = 1.0;
    rough.sigma = 0.25;
    rough.gamma = 3.0;
    rough.beta = 4.0;
    choice = select_alpha(1e-3, rough);
    CHECK_FALSE(choice.convergence_conditions_hold);
    CHECK_FALSE(choice.warning.empty());
}

TEST_CASE("config validation") {
    RegularizationConfig cfg;
    cfg.q = 2.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.sigma = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.gamma = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.alpha = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK(parse_filter("tikhonov") == FilterKind::tikhonov);
    CHECK(to_string(FilterKind::truncation) == "truncation");
    CHECK_THROWS_AS(parse_filter("landweber"), ConfigError);
}

TEST_CASE("truncation above the kernel maximum gives zero") {
    const auto& s = setup();
    const auto rec = truncation_reconstruct(s.h, s.profile, 0.5, s.grid);
    CHECK(rec.passband_size == 0);
    CHECK(testing::max_abs(rec.samples) == 0.0);
    CHECK_THROWS_AS(truncation_reconstruct(s.h, s.profile, 0.0, s.grid), ConfigError);
    CHECK_THROWS_AS(tikhonov_reconstruct(s.h, s.profile, -1.0, s.grid), ConfigError);
}

TEST_CASE("noiseless inversion recovers the Gaussian") {
    const auto& s = setup();
    const auto trunc = truncation_reconstruct(s.h, s.profile, 1e-6, s.grid);
    CHECK(relative_error(s.f, trunc.samples, s.grid.dx()) < 1e-6);
    const auto tik = tikhonov_reconstruct(s.h, s.profile, 1e-10, s.grid);
    CHECK(relative_error(s.f, tik.samples, s.grid.dx()) < 1e-5);
    CHECK(tik.passband_size == s.grid.size());
}

TEST_CASE("ties fall in the stop band and zero kernel values are not divided") {
    const auto& s = setup();
    const std::size_t k = s.grid.zero_index() + 7;
    const double alpha = s.profile.values[k];
    const auto rec = truncation_reconstruct(s.h, s.profile, alpha, s.grid);
    // |H| > alpha holds on |z| < z_7 only: 13 nodes
    CHECK(rec.passband_size == 13);

    KernelProfile zeroed = s.profile;
    zeroed.values[s.grid.zero_index()] = 0.0;
    const auto tik = tikhonov_reconstruct(s.h, zeroed, 1e-3, s.grid);
    CHECK(tik.passband_size == s.grid.size() - 1);
    for (double v : tik.samples) CHECK(std::isfinite(v));
}

TEST_CASE("Tikhonov stays within a factor of 3 of truncation at eps = 1e-2") {
    const auto& s = setup();
    const double alpha = select_alpha(1e-2, RegularizationConfig{}).alpha;
    NoiseSpec spec{1e-2, 0, NoiseTarget::data_h, NoiseModel::pointwise};
    const auto noisy = perturb_data(s.h, spec, s.grid);
    const double e_trunc =
        relative_error(s.f, truncation_reconstruct(noisy, s.profile, alpha, s.grid).samples, s.grid.dx());
    const double e_tik =
        relative_error(s.f, tikhonov_reconstruct(noisy, s.profile, alpha, s.grid).samples, s.grid.dx());
    CHECK(e_tik <= 3 * e_trunc);
    CHECK(e_tik >= e_trunc / 3);
}

TEST_CASE("property: stability bound and mask consistency") {
    const auto& s = setup();
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> la(-6.0, -0.5);
    std::uniform_real_distribution<double> amp(1e-4, 1e-1);
    const double dx = s.grid.dx();
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = std::pow(10.0, la(rng));
        const auto n1 = uniform_noise(rng(), kDataStream, s.grid.size());
        const auto n2 = uniform_noise(rng(), kDataStream, s.grid.size());
        const double a1 = amp(rng);
        const double a2 = amp(rng);
        std::vector<double> h1(s.h);
        std::vector<double> h2(s.h);
        for (std::size_t j = 0; j < h1.size(); ++j) {
            h1[j] += a1 * n1[j];
            h2[j] += a2 * n2[j];
        }
        const auto r1 = truncation_reconstruct(h1, s.profile, alpha, s.grid);
        const auto r2 = truncation_reconstruct(h2, s.profile, alpha, s.grid);
        CHECK(l2_error(r1.samples, r2.samples, dx) <= l2_error(h1, h2, dx) / alpha + 1e-12);

        const auto sets = level_sets(s.profile, alpha, 10.0);
        CHECK(r1.passband_size == sets.omega_count());
        const auto spectrum = forward_ft(r1.samples, s.grid);
        double outside = 0.0;
        double inside = 0.0;
        for (std::size_t k = 0; k < s.grid.size(); ++k) {
            (sets.omega_mask[k] ? inside : outside) =
                std::max(sets.omega_mask[k] ? inside : outside, std::abs(spectrum.values[k]));
        }
        CHECK(outside <= 1e-13 * std::max(1.0, inside));
    }
}

TEST_CASE("property: continuity in the source at fixed alpha") {
    const auto& s = setup();
    NoiseSpec spec{1e-3, 11, NoiseTarget::data_h, NoiseModel::pointwise};
    const auto noisy = perturb_data(s.h, spec, s.grid);
    const double alpha = 1e-3;
    const auto base = truncation_reconstruct(noisy, s.profile, alpha, s.grid).samples;
    double previous = std::numeric_limits<double>::infinity();
    for (int n : {4, 16, 64, 256, 1024}) {
        const auto psi_n = TemporalSource::affine(1.0 + 1.0 / n, -0.5 / n, 1.0);
        const auto profile_n = build_profile(psi_n, s.grid, 1.0);
        const auto rec = truncation_reconstruct(noisy, profile_n, alpha, s.grid).samples;
        const double gap = l2_error(base, rec, s.grid.dx());
        CHECK(gap < previous);
        CHECK(gap <= 20.0 / n);
        previous = gap;
    }
}

TEST_CASE("error shrinks with the noise level under the rule") {
    const auto& s = setup();
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        NoiseSpec spec{eps, 3, NoiseTarget::data_h, NoiseModel::l2};
        const auto noisy = perturb_data(s.h, spec, s.grid);
        const double alpha = select_alpha(eps, RegularizationConfig{}).alpha;
        const auto rec = truncation_reconstruct(noisy, s.profile, alpha, s.grid);
        const double err = hs_norm(
            [&] {
                std::vector<double> d(s.f.size());
                for (std::size_t j = 0; j < d.size(); ++j) d[j] = s.f[j] - rec.samples[j];
                return d;
            }(),
            0.0, s.grid);
        CHECK(err < previous);
        previous = err;
    }
}
