#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bpsi/grid.hpp"

namespace testing {

inline std::vector<double> gaussian_samples(const bpsi::SpatialGrid& grid, double center = 0.0,
                                            double width = 1.0, double amplitude = 1.0) {
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double u = (grid.node(j) - center) / width;
        out[j] = amplitude * std::exp(-u * u);
    }
    return out;
}

// Random smooth decaying field: a sum of a few Gaussian bumps.
inline std::vector<double> random_bumps(const bpsi::SpatialGrid& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    std::uniform_real_distribution<double> ctr(-4.0, 4.0);
    std::uniform_real_distribution<double> wid(0.5, 1.5);
    std::vector<double> out(grid.size(), 0.0);
    const int bumps = 1 + static_cast<int>(rng() % 4);
    for (int b = 0; b < bumps; ++b) {
        const auto g = gaussian_samples(grid, ctr(rng), wid(rng), amp(rng));
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += g[j];
    }
    return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace testing
