#include "bpsi/sources.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bpsi/errors.hpp"
#include "bpsi/quadrature.hpp"

namespace bpsi {

namespace {

constexpr int kGradedLevels = 40;
constexpr int kRootScanPerPiece = 256;

void require_horizon(double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("temporal source horizon T must be positive and finite");
    }
}

double bisect_root(const std::function<double(double)>& g, double lo, double hi) {
    double glo = g(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Sign changes of g inside each piece of the sorted breaks.
std::vector<double> sign_changes(const std::function<double(double)>& g,
                                 const std::vector<double>& breaks) {
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        if (!(b > a)) continue;
        const double h = (b - a) / kRootScanPerPiece;
        // Sample strictly inside the piece so jumps at the breaks are ignored.
        double prev_x = a + 0.5 * h * 1e-3;
        double prev = g(prev_x);
        for (int k = 1; k <= kRootScanPerPiece; ++k) {
            const double x = k == kRootScanPerPiece ? b - 0.5 * h * 1e-3 : a + k * h;
            const double v = g(x);
            if (std::isfinite(prev) && std::isfinite(v) && prev != 0.0 && v != 0.0 &&
                (prev < 0.0) != (v < 0.0)) {
                roots.push_back(bisect_root(g, prev_x, x));
            }
            prev_x = x;
            prev = v;
        }
    }
    return roots;
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// \int_0^T |psi(T - tau) - other(T - tau)| dtau with the endpoint
// singularity removed by tau = u^k, k = 1 / (1 - theta).
double lag_abs_integral(const TemporalSource& psi, const TemporalSource* other) {
    const double horizon = psi.horizon();
    auto diff = [&](double tau) {
        return psi.at_lag(tau) - (other != nullptr ? other->at_lag(tau) : 0.0);
    };
    double theta = std::max(psi.theta(), 0.0);
    std::vector<double> tau_breaks = psi.lag_breaks();
    if (other != nullptr) {
        theta = std::max(theta, other->theta());
        const auto more = other->lag_breaks();
        tau_breaks.insert(tau_breaks.end(), more.begin(), more.end());
    }
    tau_breaks.push_back(0.0);
    tau_breaks.push_back(horizon);
    tau_breaks = sorted_unique(std::move(tau_breaks));
    const auto roots = sign_changes(diff, tau_breaks);
    tau_breaks.insert(tau_breaks.end(), roots.begin(), roots.end());
    tau_breaks = sorted_unique(std::move(tau_breaks));

    const double k = 1.0 / (1.0 - theta);
    const double u_max = std::pow(horizon, 1.0 / k);
    std::vector<double> u_breaks;
    for (double tau : tau_breaks) u_breaks.push_back(std::pow(tau, 1.0 / k));
    u_breaks.back() = u_max;
    const double first = u_breaks.size() > 1 ? u_breaks[1] : u_max;
    const auto graded = graded_breaks(first, kGradedLevels);
    u_breaks.insert(u_breaks.end(), graded.begin(), graded.end());
    u_breaks = sorted_unique(std::move(u_breaks));

    auto integrand = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double tau = std::pow(u, k);
        return k * std::pow(u, k - 1.0) * std::abs(diff(tau));
    };
    const auto r = integrate_pieces(integrand, u_breaks);
    if (!r.converged) {
        throw AccuracyError("L1 quadrature did not converge", r.value, r.error);
    }
    return r.value;
}

}  // namespace

std::string_view to_string(PsiKind kind) {
    switch (kind) {
        case PsiKind::constant: return "constant";
        case PsiKind::power_singular: return "power_singular";
        case PsiKind::affine: return "affine";
        case PsiKind::sampled: return "sampled";
    }
    return "unknown";
}

TemporalSource TemporalSource::constant(double c, double horizon) {
    require_horizon(horizon);
    TemporalSource s;
    s.kind_ = PsiKind::constant;
    s.horizon_ = horizon;
    s.a_ = c;
    return s;
}

TemporalSource TemporalSource::power_singular(double theta, double b0, double xi,
                                              double horizon) {
    require_horizon(horizon);
    if (!(theta < 1.0)) {
        throw DomainError("power-singular source needs theta < 1 for psi in L^1(0,T)");
    }
    TemporalSource s;
    s.kind_ = PsiKind::power_singular;
    s.horizon_ = horizon;
    s.theta_ = theta;
    s.b0_ = b0;
    s.xi_ = xi;
    return s;
}

TemporalSource TemporalSource::affine(double a, double b, double horizon) {
    require_horizon(horizon);
    TemporalSource s;
    s.kind_ = PsiKind::affine;
    s.horizon_ = horizon;
    s.a_ = a;
    s.b_ = b;
    return s;
}

TemporalSource TemporalSource::sampled(std::vector<double> t, std::vector<double> values) {
    if (t.size() != values.size() || t.size() < 2) {
        throw ShapeError("sampled source needs at least two (t, value) pairs of equal length");
    }
    if (t.front() != 0.0) throw DomainError("sampled source table must start at t = 0");
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (!(t[i + 1] > t[i])) throw DomainError("sampled source times must increase strictly");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError("sampled source values must be finite");
    }
    TemporalSource s;
    s.kind_ = PsiKind::sampled;
    s.horizon_ = t.back();
    require_horizon(s.horizon_);
    s.table_t_ = std::move(t);
    s.table_v_ = std::move(values);
    return s;
}

TemporalSource TemporalSource::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open source table " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("source table " + path.string() + " is empty");
    std::vector<double> t;
    std::vector<double> v;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a = 0.0;
        double b = 0.0;
        if (!(row >> a >> b)) {
            throw IoError(path.string() + ":" + std::to_string(line_no) +
                          ": expected two numeric columns (t, value)");
        }
        t.push_back(a);
        v.push_back(b);
    }
    return sampled(std::move(t), std::move(v));
}

TemporalSource TemporalSource::with_offsets(std::vector<double> offsets) const {
    if (!offsets_.empty() && !offsets.empty() && offsets.size() != offsets_.size()) {
        throw ShapeError("offset perturbations must use the same subinterval count");
    }
    TemporalSource s = *this;
    if (s.offsets_.empty()) {
        s.offsets_ = std::move(offsets);
    } else {
        for (std::size_t i = 0; i < offsets.size(); ++i) s.offsets_[i] += offsets[i];
    }
    return s;
}

double TemporalSource::theta() const noexcept {
    if (kind_ != PsiKind::power_singular) return 0.0;
    // A bounded perturbation dominates a vanishing (theta < 0) base near T.
    if (theta_ < 0.0 && !offsets_.empty()) return 0.0;
    return theta_;
}

double TemporalSource::p_T() const noexcept {
    const double last = offsets_.empty() ? 0.0 : offsets_.back();
    switch (kind_) {
        case PsiKind::constant: return a_ + last;
        case PsiKind::affine: return a_ + b_ * horizon_ + last;
        case PsiKind::sampled: return table_v_.back() + last;
        case PsiKind::power_singular:
            if (theta_ > 0.0) return b0_;
            if (theta_ == 0.0) return b0_ + last;
            return offsets_.empty() ? b0_ : last;
    }
    return 0.0;
}

double TemporalSource::bound_P() const noexcept {
    double base = 0.0;
    switch (kind_) {
        case PsiKind::constant: base = std::abs(a_); break;
        case PsiKind::affine: base = std::max(std::abs(a_), std::abs(a_ + b_ * horizon_)); break;
        case PsiKind::sampled:
            for (double v : table_v_) base = std::max(base, std::abs(v));
            break;
        case PsiKind::power_singular:
            base = std::abs(b0_) + horizon_ * std::abs(xi_);
            if (theta_ < 0.0 && !offsets_.empty()) base *= std::pow(horizon_, theta_) + 1.0;
            break;
    }
    double largest = 0.0;
    for (double o : offsets_) largest = std::max(largest, std::abs(o));
    return base + largest * std::pow(horizon_, theta());
}

std::string TemporalSource::describe() const {
    std::ostringstream os;
    os << to_string(kind_) << "(T=" << horizon_;
    switch (kind_) {
        case PsiKind::constant: os << ", c=" << a_; break;
        case PsiKind::affine: os << ", a=" << a_ << ", b=" << b_; break;
        case PsiKind::power_singular:
            os << ", theta=" << theta_ << ", b0=" << b0_ << ", xi=" << xi_;
            break;
        case PsiKind::sampled: os << ", n=" << table_t_.size(); break;
    }
    if (!offsets_.empty()) os << ", perturbed on " << offsets_.size() << " pieces";
    os << ")";
    return os.str();
}

double TemporalSource::base_at_lag(double tau) const {
    switch (kind_) {
        case PsiKind::constant: return a_;
        case PsiKind::affine: return a_ + b_ * (horizon_ - tau);
        case PsiKind::power_singular: return std::pow(tau, -theta_) * (b0_ + tau * xi_);
        case PsiKind::sampled: {
            const double t = horizon_ - tau;
            const auto it = std::upper_bound(table_t_.begin(), table_t_.end(), t);
            if (it == table_t_.begin()) return table_v_.front();
            if (it == table_t_.end()) return table_v_.back();
            const std::size_t hi = static_cast<std::size_t>(it - table_t_.begin());
            const std::size_t lo = hi - 1;
            const double w = (t - table_t_[lo]) / (table_t_[hi] - table_t_[lo]);
            return (1.0 - w) * table_v_[lo] + w * table_v_[hi];
        }
    }
    return 0.0;
}

double TemporalSource::offset_at_lag(double tau) const {
    if (offsets_.empty()) return 0.0;
    const auto n = static_cast<double>(offsets_.size());
    const double pos = (horizon_ - tau) / horizon_ * n;
    const auto i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, n - 1.0));
    return offsets_[i];
}

double TemporalSource::at_lag(double tau) const {
    return base_at_lag(tau) + offset_at_lag(tau);
}

double TemporalSource::lag_weighted(double tau) const {
    if (tau <= 0.0) return 0.0;
    if (kind_ == PsiKind::power_singular) {
        return std::pow(tau, 1.0 - theta_) * (b0_ + tau * xi_) + tau * offset_at_lag(tau);
    }
    return tau * at_lag(tau);
}

std::vector<double> TemporalSource::lag_breaks() const {
    std::vector<double> out;
    const auto n = offsets_.size();
    for (std::size_t i = 1; i < n; ++i) {
        out.push_back(horizon_ - horizon_ * static_cast<double>(i) / static_cast<double>(n));
    }
    if (kind_ == PsiKind::sampled) {
        for (std::size_t i = 1; i + 1 < table_t_.size(); ++i) out.push_back(horizon_ - table_t_[i]);
    }
    return sorted_unique(std::move(out));
}

double TemporalSource::operator()(double t) const {
    if (!(t >= 0.0 && t <= horizon_)) {
        throw DomainError("psi evaluated at t=" + std::to_string(t) + " outside [0, T]");
    }
    const double tau = horizon_ - t;
    if (tau == 0.0) {
        if (is_singular()) throw SingularityError("psi is singular at t = T");
        if (kind_ == PsiKind::power_singular && theta_ < 0.0) return offset_at_lag(0.0);
        if (kind_ == PsiKind::power_singular) return b0_ + offset_at_lag(0.0);
    }
    return at_lag(tau);
}

double eval_psi(const TemporalSource& psi, double t) { return psi(t); }

double l1_norm(const TemporalSource& psi) { return lag_abs_integral(psi, nullptr); }

double l1_distance(const TemporalSource& psi, const TemporalSource& other) {
    const double t1 = psi.horizon();
    const double t2 = other.horizon();
    if (std::abs(t1 - t2) > 1e-12 * std::max(t1, t2)) {
        throw ConfigError("l1_distance: horizons differ (" + std::to_string(t1) + " vs " +
                          std::to_string(t2) + ")");
    }
    return lag_abs_integral(psi, &other);
}

SpatialSourceSpec SpatialSourceSpec::gaussian(double amplitude, double width, double center,
                                              double gamma) {
    if (!(width > 0.0)) throw DomainError("gaussian width must be positive");
    if (!(gamma >= 0.0)) throw DomainError("smoothness gamma must be >= 0");
    SpatialSourceSpec s;
    s.kind_ = SpatialKind::gaussian;
    s.amplitude_ = amplitude;
    s.width_ = width;
    s.center_ = center;
    s.gamma_ = gamma;
    return s;
}

SpatialSourceSpec SpatialSourceSpec::sampled(std::vector<double> samples, SpatialGrid grid,
                                             double gamma) {
    if (samples.size() != grid.size()) throw ShapeError("spatial samples do not match the grid");
    for (double v : samples) {
        if (!std::isfinite(v)) throw DomainError("spatial samples must be finite");
    }
    if (!(gamma >= 0.0)) throw DomainError("smoothness gamma must be >= 0");
    SpatialSourceSpec s;
    s.kind_ = SpatialKind::sampled;
    s.samples_ = std::move(samples);
    s.grid_ = grid;
    s.gamma_ = gamma;
    return s;
}

double SpatialSourceSpec::operator()(double x) const {
    if (kind_ == SpatialKind::gaussian) {
        const double u = (x - center_) / width_;
        return amplitude_ * std::exp(-u * u);
    }
    const SpatialGrid& g = *grid_;
    const double pos = (x - g.left()) / g.dx();
    if (pos <= 0.0) return samples_.front();
    if (pos >= static_cast<double>(g.size() - 1)) return samples_.back();
    const auto lo = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * samples_[lo] + w * samples_[lo + 1];
}

std::vector<double> SpatialSourceSpec::sample(const SpatialGrid& grid) const {
    if (kind_ == SpatialKind::sampled) {
        if (!(grid == *grid_)) throw ShapeError("sampled spatial source lives on a different grid");
        return samples_;
    }
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = (*this)(grid.node(j));
    return out;
}

}  // namespace bpsi
