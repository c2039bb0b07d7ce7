// quadrature.hpp: panel-split adaptive quadrature over [0, inf) for
// nonnegative, oscillatory, exponentially damped integrands

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pddqsl/errors.hpp"

namespace pddqsl::quad {

struct Result {
    double value{0.0};
    double error{0.0};   // summed per-panel |K31 - G15| estimates
    std::size_t panels{0};
};

struct Options {
    double rel_tol{1e-10};
    unsigned max_depth{18};
    // Finite panels stop at tail_start * scale; [tail_start*scale, inf) is one mapped panel.
    double tail_start{80.0};
};

// Panel boundaries: multiples of min(scale, pi / max_frequency) up to the tail start,
// with `scale` itself always a boundary.
inline std::vector<double> panel_breaks(double scale, double max_frequency, double tail_start) {
    const double upper = tail_start * scale;
    double width = scale;
    if (max_frequency > 0.0) width = std::min(width, std::numbers::pi / max_frequency);

    std::vector<double> breaks;
    const auto count = static_cast<std::size_t>(std::ceil(upper / width));
    breaks.reserve(count + 2);
    for (std::size_t k = 0; k <= count; ++k)
        breaks.push_back(std::min(upper, static_cast<double>(k) * width));
    breaks.push_back(scale);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    return breaks;
}

// Integrates a nonnegative f over [0, inf). Because f >= 0, per-panel relative
// accuracy bounds the relative accuracy of the sum.
template <class F>
Result integrate_half_line(F&& f, double scale, double max_frequency, const Options& opt = {}) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const auto breaks = panel_breaks(scale, max_frequency, opt.tail_start);

    Result r;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double err = 0.0;
        if (i == 0) {
            // omega^s behaviour at the origin (fractional s) defeats Gauss-Kronrod; tanh-sinh
            // clusters nodes at the endpoint instead.
            boost::math::quadrature::tanh_sinh<double> ts(opt.max_depth > 0 ? 15 : 1);
            try {
                r.value += ts.integrate(f, breaks[0], breaks[1], 0.1 * opt.rel_tol, &err);
            } catch (const boost::math::evaluation_error& e) {
                throw QuadratureError(e.what(), std::numeric_limits<double>::quiet_NaN(),
                                      std::numeric_limits<double>::infinity());
            }
            r.error += err;
            ++r.panels;
            continue;
        }
        r.value += GK::integrate(f, breaks[i], breaks[i + 1], opt.max_depth, opt.rel_tol, &err);
        r.error += err;
        ++r.panels;
    }
    double err = 0.0;
    r.value += GK::integrate(f, breaks.back(), std::numeric_limits<double>::infinity(),
                             opt.max_depth, opt.rel_tol, &err);
    r.error += err;
    ++r.panels;

    if (!std::isfinite(r.value))
        throw QuadratureError("quadrature produced a non-finite value", r.value, r.error);
    const double floor = 1e-300;
    if (r.error > std::max(opt.rel_tol * std::abs(r.value), floor))
        throw QuadratureError("quadrature did not converge to the requested tolerance", r.value, r.error);
    return r;
}

// sin(x)/x, exact at 0.
inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

} // namespace pddqsl::quad
