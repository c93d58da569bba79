#include "bpsi/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <vector>

namespace bpsi {

namespace {

using Rule = boost::math::quadrature::gauss<double, 15>;

double panel(const std::function<double(double)>& f, double a, double b) {
    return Rule::integrate(f, a, b);
}

struct Accumulator {
    const std::function<double(double)>& f;
    const QuadratureOptions& opts;
    double total_width;
    QuadratureResult result;

    void refine(double a, double b, double whole, int depth) {
        const double mid = 0.5 * (a + b);
        const double left = panel(f, a, mid);
        const double right = panel(f, mid, b);
        const double halves = left + right;
        const double diff = std::abs(halves - whole);
        const double tol = std::max(opts.abs_tol * (b - a) / total_width,
                                    opts.rel_tol * std::abs(halves));
        if (diff <= tol || !std::isfinite(diff)) {
            result.value += halves;
            result.error += diff;
            if (!std::isfinite(diff)) result.converged = false;
            return;
        }
        if (depth >= opts.max_depth) {
            result.value += halves;
            result.error += diff;
            result.converged = false;
            return;
        }
        refine(a, mid, left, depth + 1);
        refine(mid, b, right, depth + 1);
    }
};

QuadratureResult integrate_scaled(const std::function<double(double)>& f, double a, double b,
                                  double reference_width, const QuadratureOptions& opts) {
    if (!(b > a)) return {};
    Accumulator acc{f, opts, reference_width, {}};
    acc.refine(a, b, panel(f, a, b), 0);
    return acc.result;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
    return integrate_scaled(f, a, b, b - a, opts);
}

QuadratureResult integrate_pieces(const std::function<double(double)>& f,
                                  std::span<const double> breaks,
                                  const QuadratureOptions& opts) {
    QuadratureResult total;
    if (breaks.size() < 2) return total;
    const double span_width = breaks.back() - breaks.front();
    if (!(span_width > 0.0)) return total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        if (!(b > a)) continue;
        // The absolute budget is shared across pieces in proportion to width.
        const auto r = integrate_scaled(f, a, b, span_width, opts);
        total.value += r.value;
        total.error += r.error;
        total.converged = total.converged && r.converged;
    }
    return total;
}

std::vector<double> graded_breaks(double width, int levels, double ratio) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(levels) + 2);
    out.push_back(0.0);
    for (int k = levels; k >= 1; --k) out.push_back(width * std::pow(ratio, k));
    out.push_back(width);
    return out;
}

}  // namespace bpsi
