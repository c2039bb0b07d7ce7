// spectral.hpp: Ohmic-family spectral densities and the free pure-dephasing
// decoherence function Gamma_0(t), closed form plus a quadrature oracle

#pragma once

#include <cmath>
#include <string>

#include "pddqsl/errors.hpp"
#include "pddqsl/quadrature.hpp"

namespace pddqsl {

// I(w) = eta * w^s / wc^(s-1) * exp(-w/wc). Times elsewhere are in units of 1/omega_c.
struct SpectralParams {
    double s{1.0};        // Ohmicity: 1 Ohmic, <1 sub-Ohmic, >1 super-Ohmic
    double eta{0.5};      // dimensionless coupling
    double omega_c{1.0};  // cutoff frequency

    void validate() const {
        if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("SpectralParams: s must be > 0");
        if (!(eta >= 0.0) || !std::isfinite(eta)) throw DomainError("SpectralParams: eta must be >= 0");
        if (!(omega_c > 0.0) || !std::isfinite(omega_c))
            throw DomainError("SpectralParams: omega_c must be > 0");
    }

    friend bool operator==(const SpectralParams&, const SpectralParams&) = default;
};

// |s - 1| below this is evaluated with the Ohmic logarithm instead of Gamma(s-1).
inline constexpr double kOhmicThreshold = 1e-9;

inline bool is_ohmic(const SpectralParams& p) { return std::abs(p.s - 1.0) < kOhmicThreshold; }

inline double spectral_density(const SpectralParams& p, double omega) {
    p.validate();
    if (!(omega >= 0.0)) throw DomainError("spectral_density: omega must be >= 0");
    if (omega == 0.0) return 0.0;
    return p.eta * std::pow(omega, p.s) * std::pow(p.omega_c, 1.0 - p.s) * std::exp(-omega / p.omega_c);
}

namespace detail {

inline void check_time(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be finite and >= 0");
}

} // namespace detail

// Closed form:
//   s != 1: eta*Gamma(s-1) * {1 - cos[(s-1) atan(wc t)] / (1 + wc^2 t^2)^((s-1)/2)}
//   s == 1: (eta/2) ln(1 + wc^2 t^2)
inline double gamma0_analytic(const SpectralParams& p, double t) {
    p.validate();
    detail::check_time(t, "gamma0_analytic");
    const double u = p.omega_c * t;
    if (is_ohmic(p)) return 0.5 * p.eta * std::log1p(u * u);

    const double a = p.s - 1.0;
    const double half_log = 0.5 * std::log1p(u * u);
    const double theta = std::atan(u);
    // 1 - cos(a theta) e^{-a L} = (1 - e^{-a L}) + e^{-a L} (1 - cos(a theta)); stable as a -> 0.
    const double decay = std::exp(-a * half_log);
    const double sin_half = std::sin(0.5 * a * theta);
    const double bracket = -std::expm1(-a * half_log) + decay * 2.0 * sin_half * sin_half;
    return p.eta * std::tgamma(a) * bracket;
}

enum class DerivativeMethod { analytic, central_difference };

// Step used by the central-difference route: h = kDerivativeStep * max(1, t).
inline constexpr double kDerivativeStep = 1e-4;

// dGamma_0/dt = eta wc Gamma(s) (1 + u^2)^(-s/2) sin(s atan u), u = wc t.
// Smooth through s = 1, where it reduces to eta wc^2 t / (1 + wc^2 t^2).
inline double gamma0_derivative(const SpectralParams& p, double t,
                                DerivativeMethod method = DerivativeMethod::analytic) {
    p.validate();
    detail::check_time(t, "gamma0_derivative");
    if (method == DerivativeMethod::central_difference) {
        // Gamma_0 is even in t, so the left point reflects through 0.
        const double h = kDerivativeStep * std::max(1.0, t);
        return (gamma0_analytic(p, t + h) - gamma0_analytic(p, std::abs(t - h))) / (2.0 * h);
    }
    const double u = p.omega_c * t;
    if (is_ohmic(p)) return p.eta * p.omega_c * u / (1.0 + u * u);
    return p.eta * p.omega_c * std::tgamma(p.s) * std::pow(1.0 + u * u, -0.5 * p.s) * std::sin(p.s * std::atan(u));
}

// Oracle: Gamma_0(t) = int_0^inf I(w)/w^2 [1 - cos(w t)] dw, evaluated with the
// kernel written as (t^2/2) sinc^2(w t / 2) so that nothing cancels near w = 0.
inline double gamma0_quadrature(const SpectralParams& p, double t, double tol = 1e-10) {
    p.validate();
    detail::check_time(t, "gamma0_quadrature");
    if (!(tol > 0.0)) throw DomainError("gamma0_quadrature: tol must be > 0");
    if (t == 0.0 || p.eta == 0.0) return 0.0;

    const double half_t2 = 0.5 * t * t;
    auto integrand = [&](double w) {
        if (w <= 0.0) return 0.0;
        const double k = quad::sinc(0.5 * w * t);
        return spectral_density(p, w) * half_t2 * k * k;
    };
    quad::Options opt;
    opt.rel_tol = tol;
    opt.tail_start = 60.0 + 2.0 * p.s;
    return quad::integrate_half_line(integrand, p.omega_c, t, opt).value;
}

// Free (uncontrolled) decoherence source: value and rate, the interface
// ControlledGamma expects from its base.
struct FreeDecoherence {
    SpectralParams params;

    explicit FreeDecoherence(SpectralParams p) : params(p) { params.validate(); }

    double value(double t) const { return gamma0_analytic(params, t); }
    double rate(double t) const { return gamma0_derivative(params, t); }
};

} // namespace pddqsl
