// pulses.hpp: periodic dynamical decoupling schedules and the controlled
// decoherence function under a finite train of ideal pi pulses

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pddqsl/errors.hpp"
#include "pddqsl/quadrature.hpp"
#include "pddqsl/spectral.hpp"

namespace pddqsl {

// Ordered instants of instantaneous pi pulses, 0 < tau_1 < ... < tau_N < tau_f.
// An empty schedule is free decay.
class PulseSchedule {
public:
    PulseSchedule() = default;

    PulseSchedule(std::vector<double> instants, double tau_f)
        : instants_(std::move(instants)), tau_f_(tau_f) {
        if (!(tau_f_ > 0.0) || !std::isfinite(tau_f_)) throw DomainError("PulseSchedule: tau_f must be > 0");
        for (std::size_t i = 0; i < instants_.size(); ++i) {
            const double t = instants_[i];
            if (!(t > 0.0) || !(t < tau_f_))
                throw DomainError("PulseSchedule: pulse instants must lie strictly inside (0, tau_f)");
            if (i > 0 && !(t > instants_[i - 1]))
                throw DomainError("PulseSchedule: pulse instants must be strictly increasing");
        }
    }

    std::span<const double> instants() const noexcept { return instants_; }
    std::size_t n_pulses() const noexcept { return instants_.size(); }
    bool empty() const noexcept { return instants_.empty(); }
    double tau_f() const noexcept { return tau_f_; }

    // Number of pulses strictly before t; selects the branch Gamma_#n.
    std::size_t active_pulses(double t) const {
        return static_cast<std::size_t>(std::lower_bound(instants_.begin(), instants_.end(), t) - instants_.begin());
    }

    friend bool operator==(const PulseSchedule&, const PulseSchedule&) = default;

private:
    std::vector<double> instants_;
    double tau_f_{1.0};
};

// Equally spaced PDD: tau_n = n tau_f / (N + 1), n = 1..N.
inline PulseSchedule pdd_schedule(std::size_t n_pulses, double tau_f) {
    if (!(tau_f > 0.0)) throw DomainError("pdd_schedule: tau_f must be > 0");
    std::vector<double> instants;
    instants.reserve(n_pulses);
    const double denom = static_cast<double>(n_pulses + 1);
    for (std::size_t n = 1; n <= n_pulses; ++n)
        instants.push_back(static_cast<double>(n) * tau_f / denom);
    return PulseSchedule(std::move(instants), tau_f);
}

inline double pdd_spacing(std::size_t n_pulses, double tau_f) {
    return tau_f / static_cast<double>(n_pulses + 1);
}

// Base must provide value(t) = Gamma_0(t) and rate(t) = dGamma_0/dt.
template <class Base>
concept DecoherenceSource = requires(const Base& b, double t) {
    { b.value(t) } -> std::convertible_to<double>;
    { b.rate(t) } -> std::convertible_to<double>;
};

// Gamma(t) for a pulse train: Gamma_0(t) up to tau_1, then after the n-th pulse
//   Gamma_#n(t) = (-1)^n G0(t) + 2 sum_j (-1)^(j+n) G0(t - tau_j)
//               + 2 sum_j (-1)^(j+1) G0(tau_j) + 4 sum_{j>k} (-1)^(j+k+1) G0(tau_j - tau_k).
// The last two (schedule-only) sums are tabulated for every n at construction.
template <DecoherenceSource Base>
class ControlledGamma {
public:
    ControlledGamma(Base base, PulseSchedule schedule)
        : base_(std::move(base)), schedule_(std::move(schedule)) {
        const auto tau = schedule_.instants();
        const std::size_t n_max = tau.size();
        fixed_.assign(n_max + 1, 0.0);
        double single = 0.0;
        double pairs = 0.0;
        for (std::size_t j = 1; j <= n_max; ++j) {
            single += 2.0 * parity(j + 1) * base_.value(tau[j - 1]);
            for (std::size_t k = 1; k < j; ++k)
                pairs += 4.0 * parity(j + k + 1) * base_.value(tau[j - 1] - tau[k - 1]);
            fixed_[j] = single + pairs;
        }
    }

    double operator()(double t) const { return value(t); }

    double value(double t) const {
        const std::size_t n = schedule_.active_pulses(t);
        if (n == 0) return base_.value(t);
        const auto tau = schedule_.instants();
        double v = parity(n) * base_.value(t);
        for (std::size_t j = 1; j <= n; ++j)
            v += 2.0 * parity(j + n) * base_.value(t - tau[j - 1]);
        return v + fixed_[n];
    }

    // dGamma/dt on the open segment containing t (one-sided from the left at a pulse).
    double rate(double t) const {
        const std::size_t n = schedule_.active_pulses(t);
        if (n == 0) return base_.rate(t);
        const auto tau = schedule_.instants();
        double v = parity(n) * base_.rate(t);
        for (std::size_t j = 1; j <= n; ++j)
            v += 2.0 * parity(j + n) * base_.rate(t - tau[j - 1]);
        return v;
    }

    const PulseSchedule& schedule() const noexcept { return schedule_; }
    const Base& base() const noexcept { return base_; }

private:
    static constexpr double parity(std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

    Base base_;
    PulseSchedule schedule_;
    std::vector<double> fixed_;  // fixed_[n]: schedule-only sums for branch n
};

template <DecoherenceSource Base>
double controlled_gamma(const Base& base, const PulseSchedule& schedule, double t) {
    return ControlledGamma<Base>(base, schedule).value(t);
}

inline double controlled_gamma(const SpectralParams& p, const PulseSchedule& schedule, double t) {
    return controlled_gamma(FreeDecoherence(p), schedule, t);
}

// Oracle: Gamma(t) = int_0^inf I(w)/(2 w^2) |f_n(w,t)|^2 dw with the filter
//   f_n = 1 + (-1)^(n+1) e^{iwt} + 2 sum_{j<=n} (-1)^j e^{i w tau_j},  n = #{tau_j < t}.
// The coefficients sum to zero, so f_n/w = sum c_k (e^{i w x_k} - 1)/w is evaluated
// as sum c_k i x_k sinc(w x_k/2) e^{i w x_k/2}.
inline double controlled_gamma_quadrature(const SpectralParams& p, const PulseSchedule& schedule, double t,
                                          double tol = 1e-10) {
    p.validate();
    detail::check_time(t, "controlled_gamma_quadrature");
    if (!(tol > 0.0)) throw DomainError("controlled_gamma_quadrature: tol must be > 0");
    if (t == 0.0 || p.eta == 0.0) return 0.0;

    const std::size_t n = schedule.active_pulses(t);
    std::vector<std::pair<double, double>> terms;  // (x_k, c_k), x = 0 drops out
    terms.reserve(n + 1);
    terms.emplace_back(t, (n % 2 == 0) ? -1.0 : 1.0);
    const auto tau = schedule.instants();
    for (std::size_t j = 1; j <= n; ++j) terms.emplace_back(tau[j - 1], (j % 2 == 0) ? 2.0 : -2.0);

    auto integrand = [&](double w) {
        if (w <= 0.0) return 0.0;
        std::complex<double> f_over_w{0.0, 0.0};
        for (const auto& [x, c] : terms) {
            const double half = 0.5 * w * x;
            f_over_w += c * x * quad::sinc(half) * std::complex<double>(-std::sin(half), std::cos(half));
        }
        return 0.5 * spectral_density(p, w) * std::norm(f_over_w);
    };
    quad::Options opt;
    opt.rel_tol = tol;
    opt.tail_start = 60.0 + 2.0 * p.s;
    return quad::integrate_half_line(integrand, p.omega_c, t, opt).value;
}

} // namespace pddqsl
