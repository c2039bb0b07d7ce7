// qsl.hpp: quantum speed limit time of dephasing X-states
//
// Three routes are provided:
//   qslt_ratio        tau_QSL / tau_d = Phi0 |1 - Q(t)| / int_0^tau_d |dQ/dt| dt
//   qslt_upper_bound  Phi0 (1 - e^{-G(t)}) / (1 - e^{-G(tau_d)}),  G = -ln Q
//   qslt_general      max{1/<sum sigma_i rho_i>, 1/<sqrt(sum sigma_i^2)>} |f(tau_d) - 1| tr(rho0^2)
// The first two use the total variation of Q (sampled differences); the last
// integrates singular values of d(rho)/dt built from dQ/dt, so they are independent.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "pddqsl/correlations.hpp"
#include "pddqsl/dynamics.hpp"
#include "pddqsl/errors.hpp"

namespace pddqsl {

// Phi0 = max{ 2(|r14|^2 + |r23|^2) / [(r11 + r44)|r14| + (r22 + r33)|r23|],  sqrt(2(|r14|^2 + |r23|^2)) }
inline double phi0(const TwoQubitState& rho0) {
    if (!rho0.is_x_form()) throw DomainError("phi0: initial state must be of X form");
    const double a = std::abs(rho0(0, 3));
    const double b = std::abs(rho0(1, 2));
    const double denom = (rho0(0, 0).real() + rho0(3, 3).real()) * a + (rho0(1, 1).real() + rho0(2, 2).real()) * b;
    if (a + b == 0.0 || denom <= 0.0)
        throw NoCoherenceError("phi0: X-state without rho14/rho23 coherence has no dephasing dynamics");
    const double norm2 = 2.0 * (a * a + b * b);
    return std::max(norm2 / denom, std::sqrt(norm2));
}

// Singular values of the X-shaped d(rho)/dt with anti-diagonal entries a14_dot, a23_dot.
inline std::array<double, 4> x_singular_values(cplx a14_dot, cplx a23_dot) {
    std::array<double, 4> sv{std::abs(a14_dot), std::abs(a14_dot), std::abs(a23_dot), std::abs(a23_dot)};
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

// Plain sum of |Q(t_{i+1}) - Q(t_i)| over samples.
inline double total_variation(std::span<const double> samples) {
    double tv = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) tv += std::abs(samples[i] - samples[i - 1]);
    return tv;
}

struct RefineOptions {
    double rel_tol{1e-10};
    double abs_tol{1e-16};
    // Refinement starts at 2^min_doublings steps and must settle on two successive doublings.
    unsigned min_doublings{4};
    unsigned max_doublings{22};
};

namespace detail {

// Uniform refinement of [a, b] by repeated midpoint insertion until the estimate
// settles. `estimate(samples, a, b, f)` maps 2^k + 1 samples to a value.
template <class F, class Estimate>
double refine_interval(F& f, double a, double b, double abs_tol, const RefineOptions& opt, Estimate&& estimate) {
    std::vector<double> y{f(a), f(b)};
    std::vector<double> next;
    double prev = estimate(y, a, b, f);
    double change = std::numeric_limits<double>::infinity();
    bool settled = false;
    for (unsigned k = 1; k <= opt.max_doublings; ++k) {
        const std::size_t m = y.size() - 1;
        const double h = (b - a) / static_cast<double>(2 * m);
        next.assign(2 * m + 1, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            next[2 * i] = y[i];
            next[2 * i + 1] = f(a + static_cast<double>(2 * i + 1) * h);
        }
        next[2 * m] = y[m];
        y.swap(next);
        if (k + 1 < opt.min_doublings) continue;
        const double cur = estimate(y, a, b, f);
        change = std::abs(cur - prev);
        const bool small = change <= abs_tol + opt.rel_tol * std::abs(cur);
        if (k >= opt.min_doublings && small && settled) return cur;
        settled = small;
        prev = cur;
    }
    throw ConvergenceError("grid refinement did not converge on [" + std::to_string(a) + ", " + std::to_string(b) + "]",
                           prev, change);
}

// Variation of samples is blind to where an extremum sits between two samples, so
// turning points are polished with Brent's method and added to the samples. Cells
// touching the ends are searched in both directions, since a turning point there
// need not show up as a sign change of the differences. Extra true samples can only
// move the sum toward the exact variation.
struct TvEstimate {
    template <class F>
    double operator()(const std::vector<double>& y, double a, double b, F& f) const {
        const std::size_t m = y.size() - 1;
        if (m < 2) return std::abs(y[1] - y[0]);
        const double h = (b - a) / static_cast<double>(m);
        auto at = [&](std::size_t i) { return i == m ? b : a + static_cast<double>(i) * h; };
        std::vector<std::pair<double, double>> pts;
        pts.reserve(m + 8);
        for (std::size_t i = 0; i <= m; ++i) pts.emplace_back(at(i), y[i]);
        auto polish = [&](double lo, double hi, double sign) {  // sign = -1 finds a maximum
            auto g = [&](double t) { return sign * f(t); };
            const auto best = boost::math::tools::brent_find_minima(g, lo, hi, std::numeric_limits<double>::digits / 2);
            if (best.first > a && best.first < b) pts.emplace_back(best.first, sign * best.second);
        };
        for (std::size_t i = 1; i < m; ++i) {
            const double left = y[i] - y[i - 1];
            const double right = y[i + 1] - y[i];
            if (left * right < 0.0) polish(at(i - 1), at(i + 1), left > 0.0 ? -1.0 : 1.0);
        }
        for (double sign : {-1.0, 1.0}) {
            polish(a, at(1), sign);
            polish(at(m - 1), b, sign);
        }
        std::sort(pts.begin(), pts.end());
        double tv = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i) tv += std::abs(pts[i].second - pts[i - 1].second);
        return tv;
    }
};

// Composite Simpson; y.size() - 1 is even after the first doubling.
struct SimpsonEstimate {
    template <class F>
    double operator()(const std::vector<double>& y, double a, double b, F&) const {
        const double width = b - a;
        const std::size_t m = y.size() - 1;
        if (m < 2) return 0.5 * width * (y.front() + y.back());
        const double h = width / static_cast<double>(m);
        double s = y.front() + y.back();
        for (std::size_t i = 1; i < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
        return s * h / 3.0;
    }
};

inline void check_knots(std::span<const double> knots) {
    if (knots.size() < 2) throw DomainError("need at least two knots");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1])) throw DomainError("knots must be strictly increasing");
}

template <class F, class Estimate>
std::vector<double> cumulative(F&& f, std::span<const double> knots, const RefineOptions& opt, Estimate&& estimate,
                               bool one_sided) {
    check_knots(knots);
    const std::size_t n = knots.size() - 1;
    // Coarse total fixes the per-interval absolute tolerance so the sum meets rel_tol.
    double coarse = 0.0;
    std::vector<double> ends(knots.size());
    for (std::size_t i = 0; i <= n; ++i) ends[i] = f(knots[i]);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = knots[i + 1] - knots[i];
        coarse += one_sided ? 0.5 * w * std::abs(ends[i] + ends[i + 1]) : std::abs(ends[i + 1] - ends[i]);
    }
    const double abs_tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse) / static_cast<double>(n));

    std::vector<double> out(knots.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = knots[i];
        const double b = knots[i + 1];
        // Integrands may jump at knots; sample endpoints from inside the interval.
        auto g = [&](double t) {
            if (one_sided) {
                if (t == a) return f(std::nextafter(a, b));
                if (t == b) return f(std::nextafter(b, a));
            }
            return f(t);
        };
        out[i + 1] = out[i] + refine_interval(g, a, b, abs_tol, opt, estimate);
    }
    return out;
}

} // namespace detail

// Running int_{knots[0]}^{knots[i]} |dq/dt| dt as adaptively refined sums of |dq|
// over monotone pieces.
// Knots must include every point where q is not smooth.
template <class F>
std::vector<double> cumulative_total_variation(F&& q, std::span<const double> knots, const RefineOptions& opt = {}) {
    return detail::cumulative(q, knots, opt, detail::TvEstimate{}, false);
}

template <class F>
double total_variation(F&& q, std::span<const double> knots, const RefineOptions& opt = {}) {
    return cumulative_total_variation(q, knots, opt).back();
}

// Running integral of g over the knots (composite Simpson with refinement).
template <class F>
std::vector<double> cumulative_integral(F&& g, std::span<const double> knots, const RefineOptions& opt = {}) {
    return detail::cumulative(g, knots, opt, detail::SimpsonEstimate{}, true);
}

// running: tau_d is the evaluation time itself; fixed: tau_d is the configured window.
enum class Window { running, fixed };

struct QslInputs {
    double phi0{1.0};
    std::function<double(double)> q;
    std::vector<double> breakpoints;  // instants where dQ/dt jumps
    double tau_d{1.0};
    Window window{Window::running};
};

template <class Trajectory>
QslInputs make_qsl_inputs(const TwoQubitState& rho0, const Trajectory& traj, double tau_d,
                          Window window = Window::running) {
    QslInputs in;
    in.phi0 = phi0(rho0);
    in.q = [traj](double t) { return traj.q(t); };
    const auto bp = traj.breakpoints();
    in.breakpoints.assign(bp.begin(), bp.end());
    in.tau_d = tau_d;
    in.window = window;
    return in;
}

namespace detail {

inline std::vector<double> window_knots(std::span<const double> breakpoints, double end) {
    std::vector<double> knots{0.0};
    for (double b : breakpoints)
        if (b > 0.0 && b < end) knots.push_back(b);
    knots.push_back(end);
    return knots;
}

inline double window_end(const QslInputs& in, double t_eval) {
    if (!(t_eval > 0.0)) throw DomainError("QSL evaluation time must be > 0");
    if (in.window == Window::fixed) {
        if (t_eval > in.tau_d) throw DomainError("QSL evaluation time exceeds tau_d");
        return in.tau_d;
    }
    return t_eval;
}

inline double window_variation(const QslInputs& in, double end, const RefineOptions& opt) {
    const auto knots = window_knots(in.breakpoints, end);
    const double tv = total_variation(in.q, knots, opt);
    if (tv == 0.0) throw FrozenDynamicsError("Q(t) is constant on the window; QSL time is undefined");
    return tv;
}

} // namespace detail

// tau_QSL / tau_d from the X-state closed form.
inline double qslt_ratio(const QslInputs& in, double t_eval, const RefineOptions& opt = {}) {
    const double end = detail::window_end(in, t_eval);
    const double tv = detail::window_variation(in, end, opt);
    return in.phi0 * std::abs(1.0 - in.q(t_eval)) / tv;
}

// Upper bound from |int dQ| <= int |dQ|, with the total exponent G = -ln Q.
inline double qslt_upper_bound(const QslInputs& in, double t_eval, const RefineOptions& opt = {}) {
    const double end = detail::window_end(in, t_eval);
    detail::window_variation(in, end, opt);
    const double num = 1.0 - in.q(t_eval);
    if (num <= 0.0) return 0.0;
    const double den = 1.0 - in.q(end);
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    return in.phi0 * num / den;
}

namespace detail {

inline std::array<double, 4> descending_eigenvalues(const TwoQubitState& rho0) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho0.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenSolverError("qslt_general: eigen decomposition failed");
    const Eigen::Vector4d ev = es.eigenvalues();
    return {ev(3), ev(2), ev(1), ev(0)};
}

// Integrands sum_i sigma_i rho_i (ML-type) and sqrt(sum sigma_i^2) (MT-type). Under
// dephasing d(rho)/dt = dQ/dt * (anti-diagonal of rho0), so the singular values scale
// with |dQ/dt| and both integrals are fixed multiples of the variation of Q.
struct QslWeights {
    double ml{0.0};
    double mt{0.0};
};

inline QslWeights qsl_weights(const TwoQubitState& rho0) {
    const auto s = x_singular_values(rho0(0, 3), rho0(1, 2));
    const auto eig = descending_eigenvalues(rho0);
    QslWeights w;
    double sq = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        w.ml += s[i] * eig[i];
        sq += s[i] * s[i];
    }
    w.mt = std::sqrt(sq);
    return w;
}

template <class Trajectory>
double general_from_averages(const TwoQubitState& rho0, const Trajectory& traj, double tau_d, double ml_integral,
                             double mt_integral) {
    if (ml_integral <= 0.0 && mt_integral <= 0.0)
        throw FrozenDynamicsError("d(rho)/dt vanishes on the window; QSL time is undefined");
    const double ml_avg = ml_integral / tau_d;
    const double mt_avg = mt_integral / tau_d;
    double inv = 0.0;
    if (ml_avg > 0.0) inv = std::max(inv, 1.0 / ml_avg);
    if (mt_avg > 0.0) inv = std::max(inv, 1.0 / mt_avg);
    const TwoQubitState final_state = two_qubit_evolve(rho0, traj.attenuation(tau_d));
    const double f = relative_purity(rho0, final_state);
    return inv * std::abs(f - 1.0) * rho0.purity();
}

} // namespace detail

// Open-system bound on the window [0, tau_d] for an X-state under dephasing.
// Returns tau_QSL itself (not normalised by tau_d).
template <class Trajectory>
double qslt_general(const TwoQubitState& rho0, const Trajectory& traj, double tau_d, const RefineOptions& opt = {}) {
    if (!rho0.is_x_form()) throw DomainError("qslt_general: initial state must be of X form");
    if (!(tau_d > 0.0)) throw DomainError("qslt_general: tau_d must be > 0");
    const auto w = detail::qsl_weights(rho0);
    const auto knots = detail::window_knots(traj.breakpoints(), tau_d);
    const double tv = total_variation([&](double t) { return traj.q(t); }, knots, opt);
    return detail::general_from_averages(rho0, traj, tau_d, w.ml * tv, w.mt * tv);
}

// All QSL quantities along a grid; entries that are undefined (t = 0, frozen
// dynamics) are NaN. The grid must start at 0 and contain every breakpoint.
struct QslSeries {
    std::vector<double> t;
    std::vector<double> q;
    std::vector<double> total_variation;  // int_0^t |dQ/dt|
    std::vector<double> ratio;
    std::vector<double> upper_bound;
    std::vector<double> general;          // tau_QSL from the singular-value route (running window)
};

template <class Trajectory>
QslSeries qsl_series(const TwoQubitState& rho0, const Trajectory& traj, std::span<const double> grid,
                     Window window = Window::running, const RefineOptions& opt = {}) {
    detail::check_knots(grid);
    if (grid.front() != 0.0) throw DomainError("qsl_series: grid must start at t = 0");
    for (double b : traj.breakpoints())
        if (b < grid.back() && !std::binary_search(grid.begin(), grid.end(), b))
            throw DomainError("qsl_series: every pulse instant must be a grid point");

    const std::size_t n = grid.size();
    QslSeries out;
    out.t.assign(grid.begin(), grid.end());
    out.q.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.q[i] = traj.q(grid[i]);
    out.total_variation = cumulative_total_variation([&](double t) { return traj.q(t); }, grid, opt);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.ratio.assign(n, nan);
    out.upper_bound.assign(n, nan);
    out.general.assign(n, nan);

    const double phi = phi0(rho0);
    const double tv_window = out.total_variation.back();
    const double q_window = out.q.back();
    for (std::size_t i = 1; i < n; ++i) {
        const double tv = window == Window::running ? out.total_variation[i] : tv_window;
        const double q_end = window == Window::running ? out.q[i] : q_window;
        if (tv == 0.0) continue;
        out.ratio[i] = phi * std::abs(1.0 - out.q[i]) / tv;
        const double num = 1.0 - out.q[i];
        const double den = 1.0 - q_end;
        out.upper_bound[i] = num <= 0.0 ? 0.0 : (den <= 0.0 ? std::numeric_limits<double>::infinity() : phi * num / den);
    }

    const auto w = detail::qsl_weights(rho0);
    for (std::size_t i = 1; i < n; ++i) {
        const double tv = out.total_variation[i];
        if (w.ml * tv <= 0.0 && w.mt * tv <= 0.0) continue;
        out.general[i] = detail::general_from_averages(rho0, traj, grid[i], w.ml * tv, w.mt * tv);
    }
    return out;
}

} // namespace pddqsl
