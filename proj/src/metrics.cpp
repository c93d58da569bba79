#include "bpsi/metrics.hpp"

#include <cmath>
#include <string>

#include "bpsi/errors.hpp"

namespace bpsi {

double discrete_l2_norm(std::span<const double> values, double dx) {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return std::sqrt(dx * sum);
}

double l2_error(std::span<const double> exact, std::span<const double> rec, double dx) {
    if (exact.size() != rec.size()) {
        throw ShapeError("l2_error: lengths differ (" + std::to_string(exact.size()) + " vs " +
                         std::to_string(rec.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < exact.size(); ++j) {
        const double d = exact[j] - rec[j];
        sum += d * d;
    }
    return std::sqrt(dx * sum);
}

double relative_error(std::span<const double> exact, std::span<const double> rec, double dx) {
    const double norm = discrete_l2_norm(exact, dx);
    if (!(norm > 0.0)) throw MetricError("relative error undefined for a zero exact field");
    return l2_error(exact, rec, dx) / norm;
}

double hs_norm(std::span<const double> field, double s, const SpatialGrid& grid) {
    if (!(s >= 0.0)) throw DomainError("hs_norm needs s >= 0");
    const auto spectrum = forward_ft(field, grid);
    double sum = 0.0;
    for (std::size_t k = 0; k < spectrum.values.size(); ++k) {
        const double z = grid.frequency(k);
        sum += std::pow(1.0 + z * z, s) * std::norm(spectrum.values[k]);
    }
    return std::sqrt(sum * grid.dz());
}

double fit_rate(std::span<const double> eps, std::span<const double> err) {
    if (eps.size() != err.size()) throw ShapeError("fit_rate: eps and err lengths differ");
    if (eps.size() < 3) throw DomainError("fit_rate needs at least 3 points");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0) || !(err[i] > 0.0)) {
            throw DomainError("fit_rate needs positive eps and errors");
        }
        if (i > 0 && !(eps[i] < eps[i - 1])) {
            throw DomainError("fit_rate needs strictly decreasing eps");
        }
    }
    const auto n = static_cast<double>(eps.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        mx += std::log(eps[i]);
        my += std::log(err[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double dx = std::log(eps[i]) - mx;
        sxy += dx * (std::log(err[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

RateFit fit_rate_unsaturated(std::span<const double> eps, std::span<const double> err_abs,
                             std::span<const double> err_rel, double saturation_cut) {
    if (eps.size() != err_abs.size() || eps.size() != err_rel.size()) {
        throw ShapeError("fit_rate_unsaturated: column lengths differ");
    }
    RateFit fit;
    std::vector<double> kept_err;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (err_rel[i] > saturation_cut) {
            fit.eps_dropped.push_back(eps[i]);
        } else {
            fit.eps_used.push_back(eps[i]);
            kept_err.push_back(err_abs[i]);
        }
    }
    if (fit.eps_used.size() < 3) {
        fit.eps_used.assign(eps.begin(), eps.end());
        fit.eps_dropped.clear();
        kept_err.assign(err_abs.begin(), err_abs.end());
    }
    fit.slope = fit_rate(fit.eps_used, kept_err);
    return fit;
}

InstabilityWitness instability_sequence(int n, const KernelProfile& profile,
                                        const SpatialGrid& grid) {
    if (n < 1) throw DomainError("instability_sequence needs n >= 1");
    if (profile.size() != grid.size() || !(profile.grid == grid)) {
        throw ShapeError("kernel profile was built on a different grid");
    }
    const double level = 1.0 / static_cast<double>(n);
    const std::size_t size = grid.size();
    auto eligible = [&](std::size_t k) {
        const double h = std::abs(profile.values[k]);
        return grid.mirror_index(k) < size && h > 0.0 && h <= level;
    };

    // Smallest integer radius m whose ball meets {|H| <= 1/n}.
    double nearest = -1.0;
    for (std::size_t k = 0; k < size; ++k) {
        if (!eligible(k)) continue;
        const double r = std::abs(grid.frequency(k));
        if (nearest < 0.0 || r < nearest) nearest = r;
    }
    if (nearest < 0.0) {
        throw RangeError("no frequency node has |H| <= 1/" + std::to_string(n) +
                         "; use a finer grid (larger frequency range)");
    }
    InstabilityWitness w;
    w.radius = std::max(1.0, std::ceil(nearest));

    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < size; ++k) {
        if (eligible(k) && std::abs(grid.frequency(k)) <= w.radius) members.push_back(k);
    }
    w.set_size = members.size();
    const double measure = static_cast<double>(members.size()) * grid.dz();

    SpectralField f_hat{std::vector<std::complex<double>>(size), grid};
    SpectralField h_hat{std::vector<std::complex<double>>(size), grid};
    for (std::size_t k : members) {
        const double h = std::abs(profile.values[k]);
        f_hat.values[k] = 1.0 / std::sqrt(h * measure);
        h_hat.values[k] = std::sqrt(h / measure);
    }
    w.f = inverse_ft(f_hat);
    w.h = inverse_ft(h_hat);
    w.f_norm_sq = std::pow(discrete_l2_norm(w.f, grid.dx()), 2);
    w.h_norm_sq = std::pow(discrete_l2_norm(w.h, grid.dx()), 2);
    w.ratio = std::sqrt(w.f_norm_sq / w.h_norm_sq);
    return w;
}

}  // namespace bpsi
