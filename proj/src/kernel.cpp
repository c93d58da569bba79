#include "bpsi/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "bpsi/errors.hpp"
#include "bpsi/quadrature.hpp"

namespace bpsi {

namespace {

constexpr double kExponentCut = 700.0;
constexpr int kSingularLevels = 40;
constexpr std::size_t kZeroScan = 4096;
constexpr double kZeroTolerance = 1e-12;

std::vector<double> kernel_breaks(const TemporalSource& psi, double nu, double upper,
                                  double shift) {
    int levels = kSingularLevels;
    if (!psi.is_singular() || shift > 0.0) {
        const double spread = nu * upper;
        levels = std::clamp(static_cast<int>(std::ceil(std::log2(1.0 + spread))) + 4, 4,
                            kSingularLevels);
    }
    auto breaks = graded_breaks(upper, levels);
    for (double lag : psi.lag_breaks()) {
        const double tau = lag - shift;
        if (tau > 0.0 && tau < upper) breaks.push_back(tau);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    return breaks;
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    if (n < 256 || workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w * chunk; i < std::min(n, (w + 1) * chunk); ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

double eval_kernel_until(const TemporalSource& psi, double nu, double t) {
    if (!(nu >= 0.0) || !std::isfinite(nu)) {
        throw DomainError("kernel argument nu must be finite and >= 0");
    }
    const double horizon = psi.horizon();
    if (!(t >= 0.0 && t <= horizon)) {
        throw DomainError("kernel time t must lie in [0, T]");
    }
    if (t == 0.0) return 0.0;
    // Lags are measured from t; psi(t - tau) = psi(T - (shift + tau)).
    const double shift = horizon - t;
    const double upper = nu * t > kExponentCut ? kExponentCut / nu : t;
    auto breaks = kernel_breaks(psi, nu, upper, shift);
    QuadratureResult r;
    if (shift == 0.0 && psi.is_singular()) {
        // tau = u^k with k = 1/(1 - theta) turns tau^{1-theta} into u, which
        // Gauss-Legendre resolves; the graded mesh alone does not for theta
        // near 1.
        const double k = 1.0 / (1.0 - psi.theta());
        for (double& b : breaks) b = std::pow(b, 1.0 / k);
        auto integrand = [&](double u) {
            if (u <= 0.0) return 0.0;
            const double tau = std::pow(u, k);
            return std::exp(-nu * tau) * psi.lag_weighted(tau) * k * tau / u;
        };
        r = integrate_pieces(integrand, breaks);
    } else {
        auto integrand = [&](double tau) {
            if (tau <= 0.0) return 0.0;
            const double weighted =
                shift == 0.0 ? psi.lag_weighted(tau) : tau * psi.at_lag(shift + tau);
            return std::exp(-nu * tau) * weighted;
        };
        r = integrate_pieces(integrand, breaks);
    }
    if (!r.converged) {
        throw AccuracyError("kernel quadrature did not converge at nu=" + std::to_string(nu),
                            r.value, r.error);
    }
    return r.value;
}

double eval_kernel(const TemporalSource& psi, double nu) {
    return eval_kernel_until(psi, nu, psi.horizon());
}

double KernelProfile::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

KernelProfile build_profile(const TemporalSource& psi, const SpatialGrid& grid, double sigma) {
    return build_profile_until(psi, grid, sigma, psi.horizon());
}

KernelProfile build_profile_until(const TemporalSource& psi, const SpatialGrid& grid,
                                  double sigma, double t) {
    if (!(sigma > 0.0 && sigma <= 1.0)) {
        throw DomainError("fractional exponent sigma must lie in (0, 1]");
    }
    const std::size_t n = grid.size();
    KernelProfile profile{std::vector<double>(n), std::vector<double>(n), sigma, l1_norm(psi),
                          grid};
    for (std::size_t k = 0; k < n; ++k) {
        profile.nu[k] = std::pow(std::abs(grid.frequency(k)), 2.0 * sigma);
    }

    // H depends on |z| only: evaluate z >= 0 and mirror, plus the unpaired
    // -pi/dx node of even grids.
    const std::size_t center = grid.zero_index();
    std::vector<std::size_t> todo;
    for (std::size_t k = center; k < n; ++k) todo.push_back(k);
    for (std::size_t k = 0; k < center; ++k) {
        if (grid.mirror_index(k) >= n) todo.push_back(k);
    }
    parallel_for(todo.size(), [&](std::size_t i) {
        const std::size_t k = todo[i];
        profile.values[k] = eval_kernel_until(psi, profile.nu[k], t);
    });
    for (std::size_t k = 0; k < center; ++k) {
        const std::size_t m = grid.mirror_index(k);
        if (m < n) profile.values[k] = profile.values[m];
    }

    const double bound = std::exp(-1.0) * profile.psi_l1;
    for (std::size_t k = 0; k < n; ++k) {
        const double lhs = profile.nu[k] * std::abs(profile.values[k]);
        if (lhs > bound + 1e-9 * std::max(1.0, bound)) {
            throw ConsistencyError("kernel decay bound violated at nu=" +
                                   std::to_string(profile.nu[k]));
        }
    }
    return profile;
}

std::size_t LevelSets::omega_count() const noexcept {
    return static_cast<std::size_t>(std::count(omega_mask.begin(), omega_mask.end(), 1));
}

std::size_t LevelSets::pi_count() const noexcept {
    return static_cast<std::size_t>(std::count(pi_mask.begin(), pi_mask.end(), 1));
}

LevelSets level_sets(const KernelProfile& profile, double alpha, double h0) {
    if (!(alpha > 0.0)) throw DomainError("level-set threshold alpha must be positive");
    if (!(h0 > 0.0)) throw DomainError("level-set split h0 must be positive");
    const std::size_t n = profile.size();
    LevelSets sets{alpha, h0, std::vector<std::uint8_t>(n), std::vector<std::uint8_t>(n),
                   std::vector<std::uint8_t>(n), std::vector<std::uint8_t>(n)};
    for (std::size_t k = 0; k < n; ++k) {
        const bool in_omega = std::abs(profile.values[k]) > alpha;
        sets.omega_mask[k] = in_omega;
        sets.pi_mask[k] = !in_omega;
        sets.b_mask[k] = !in_omega && profile.nu[k] <= h0;
        sets.c_mask[k] = !in_omega && profile.nu[k] > h0;
    }
    return sets;
}

std::vector<KernelZero> find_zeros(const TemporalSource& psi, double nu_max) {
    if (!(nu_max > 0.0)) throw DomainError("find_zeros needs nu_max > 0");
    std::vector<double> nu(kZeroScan);
    std::vector<double> h(kZeroScan);
    for (std::size_t i = 0; i < kZeroScan; ++i) {
        nu[i] = nu_max * static_cast<double>(i) / static_cast<double>(kZeroScan - 1);
        h[i] = eval_kernel(psi, nu[i]);
    }
    auto near_zero = [&](std::size_t i) { return std::abs(h[i]) < kZeroTolerance; };

    std::vector<KernelZero> zeros;
    for (std::size_t i = 0; i < kZeroScan; ++i) {
        if (near_zero(i)) {
            bool crossing = false;
            if (i > 0 && i + 1 < kZeroScan && !near_zero(i - 1) && !near_zero(i + 1)) {
                crossing = (h[i - 1] < 0.0) != (h[i + 1] < 0.0);
            }
            zeros.push_back({nu[i], crossing});
            continue;
        }
        if (i + 1 < kZeroScan && !near_zero(i + 1) && (h[i] < 0.0) != (h[i + 1] < 0.0)) {
            double lo = nu[i];
            double hi = nu[i + 1];
            double hlo = h[i];
            while (hi - lo > kZeroTolerance) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double hm = eval_kernel(psi, mid);
                if (hm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((hm < 0.0) == (hlo < 0.0)) {
                    lo = mid;
                    hlo = hm;
                } else {
                    hi = mid;
                }
            }
            zeros.push_back({0.5 * (lo + hi), true});
        }
    }
    return zeros;
}

double asymptotic_residual(const TemporalSource& psi, double x) {
    if (!(x > 0.0)) throw DomainError("asymptotic_residual needs x > 0");
    const double p_t = psi.p_T();
    if (p_t == 0.0) throw ConfigError("asymptotics need p_T != 0");
    const double theta = psi.theta();
    return std::pow(x, 2.0 - theta) * eval_kernel(psi, x) - p_t * std::tgamma(2.0 - theta);
}

double sandwich_threshold(const TemporalSource& psi, double x_max, std::size_t samples) {
    constexpr double kFallback = 10.0;
    const double p_t = psi.p_T();
    if (p_t == 0.0 || samples < 2 || !(x_max > 1e-3)) return kFallback;
    const double theta = psi.theta();
    const double target = p_t * std::tgamma(2.0 - theta);
    const double lo = std::log(1e-3);
    const double hi = std::log(x_max);
    double threshold = kFallback;
    bool tail_ok = false;
    for (std::size_t i = samples; i-- > 0;) {
        const double x = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                            static_cast<double>(samples - 1));
        const double scaled = std::pow(x, 2.0 - theta) * eval_kernel(psi, x);
        if (std::abs(scaled - target) > 0.5 * std::abs(target)) break;
        threshold = x;
        tail_ok = true;
    }
    return tail_ok ? threshold : kFallback;
}

double c_set_radius_constant(double p_T, double theta, double sigma) {
    return std::pow(0.5 * std::abs(p_T) * std::tgamma(2.0 - theta),
                    1.0 / (2.0 * sigma * (2.0 - theta)));
}

}  // namespace bpsi
