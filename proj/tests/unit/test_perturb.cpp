#include <doctest.h>

#include <cmath>
#include <cstring>

#include "bpsi/errors.hpp"
#include "bpsi/metrics.hpp"
#include "bpsi/perturb.hpp"
#include "bpsi/philox.hpp"
#include "test_support.hpp"

using namespace bpsi;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using P = Philox4x32;
    CHECK(P::block({0, 0, 0, 0}, {0, 0}) ==
          P::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(P::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                   {0xffffffffu, 0xffffffffu}) ==
          P::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(P::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                   {0xa4093822u, 0x299f31d0u}) ==
          P::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
    static_assert(P::block({0, 0, 0, 0}, {0, 0})[0] == 0x6627e8d5u);
    CHECK(P::key_from_seed(0x0123456789abcdefULL) == P::Key{0x89abcdefu, 0x01234567u});
}

TEST_CASE("uniform draws are open-interval and stream separated") {
    const auto a = uniform_noise(7, kDataStream, 4096);
    const auto b = uniform_noise(7, kSourceStream, 4096);
    const auto c = uniform_noise(8, kDataStream, 4096);
    CHECK(a == uniform_noise(7, kDataStream, 4096));
    CHECK(a != b);
    CHECK(a != c);
    for (double y : a) {
        CHECK(y > -1.0);
        CHECK(y < 1.0);
    }
    // first draw spelled out: Y = 2u - 1 with u from the first two output words
    const auto out = Philox4x32::block({0, 0, kDataStream, 0}, Philox4x32::key_from_seed(7));
    const std::uint64_t bits = (std::uint64_t{out[0]} << 32) | out[1];
    const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    CHECK(a[0] == 2 * u - 1);
    // prefixes agree: draw j does not depend on n
    const auto shorter = uniform_noise(7, kDataStream, 100);
    CHECK(std::equal(shorter.begin(), shorter.end(), a.begin()));
}

TEST_CASE("pointwise data noise") {
    const auto grid = make_grid(-10, 10, 1024);
    const auto h = testing::gaussian_samples(grid);
    NoiseSpec zero{0.0, 1, NoiseTarget::data_h, NoiseModel::pointwise};
    CHECK(perturb_data(h, zero, grid) == h);

    NoiseSpec spec{1e-2, 123, NoiseTarget::data_h, NoiseModel::pointwise};
    const auto a = perturb_data(h, spec, grid);
    const auto b = perturb_data(h, spec, grid);
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);

    double mean = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
        CHECK(std::abs(a[j] - h[j]) <= 1e-2);
        mean += (a[j] - h[j]) / 1e-2;
    }
    mean /= static_cast<double>(h.size());
    // sd of the mean is sqrt(1/3 / 1024) ~ 0.018; 0.06 is past 3 sd
    CHECK(std::abs(mean) <= 0.06);

    NoiseSpec source_only{1e-2, 123, NoiseTarget::source_psi, NoiseModel::pointwise};
    CHECK(perturb_data(h, source_only, grid) == h);
}

TEST_CASE("L2-budgeted data noise hits the budget exactly") {
    const auto grid = make_grid(-10, 10, 1024);
    const auto h = testing::gaussian_samples(grid);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        NoiseSpec spec{3e-3, seed, NoiseTarget::both, NoiseModel::l2};
        const auto noisy = perturb_data(h, spec, grid);
        CHECK(l2_error(h, noisy, grid.dx()) == doctest::Approx(3e-3).epsilon(1e-12));
    }
}

TEST_CASE("source noise stays inside the L1 budget") {
    const auto psi = TemporalSource::constant(1.0, 1.0);
    NoiseSpec zero{0.0, 5, NoiseTarget::source_psi, NoiseModel::pointwise};
    const auto same = perturb_source(psi, zero);
    CHECK(same.achieved_l1 == 0.0);
    CHECK(l1_distance(psi, same.psi) == 0.0);

    NoiseSpec data_only{0.1, 5, NoiseTarget::data_h, NoiseModel::pointwise};
    CHECK(perturb_source(psi, data_only).achieved_l1 == 0.0);

    double total = 0.0;
    const int seeds = 1000;
    for (int seed = 0; seed < seeds; ++seed) {
        NoiseSpec spec{0.1, static_cast<std::uint64_t>(seed), NoiseTarget::source_psi,
                       NoiseModel::pointwise};
        const auto p = perturb_source(psi, spec);
        CHECK(p.achieved_l1 <= 0.1);
        if (seed < 20) CHECK(l1_distance(psi, p.psi) == doctest::Approx(p.achieved_l1).epsilon(1e-9));
        total += p.achieved_l1;
    }
    CHECK(total / seeds == doctest::Approx(0.05).epsilon(0.10));

    // T = 2: levels scale with 1/T so the bound still holds
    const auto long_psi = TemporalSource::affine(1.0, 0.5, 2.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        NoiseSpec spec{0.3, seed, NoiseTarget::both, NoiseModel::pointwise};
        const auto p = perturb_source(long_psi, spec);
        CHECK(p.achieved_l1 <= 0.3);
        CHECK(l1_distance(long_psi, p.psi) == doctest::Approx(p.achieved_l1).epsilon(1e-9));
    }
}

TEST_CASE("noise names parse and round-trip") {
    for (auto t : {NoiseTarget::data_h, NoiseTarget::source_psi, NoiseTarget::both}) {
        CHECK(parse_noise_target(to_string(t)) == t);
    }
    for (auto m : {NoiseModel::pointwise, NoiseModel::l2}) {
        CHECK(parse_noise_model(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_noise_target("everything"), ConfigError);
    CHECK_THROWS_AS(parse_noise_model("gaussian"), ConfigError);
}
