// verify.hpp: invariant report run by `pddqsl verify`

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "pddqsl/correlations.hpp"
#include "pddqsl/dynamics.hpp"
#include "pddqsl/pulses.hpp"
#include "pddqsl/qsl.hpp"
#include "pddqsl/scenario.hpp"
#include "pddqsl/spectral.hpp"

namespace pddqsl {

struct CheckResult {
    std::string name;
    double measured{0.0};
    double tolerance{0.0};
    bool pass{false};
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
    }

    void print(std::ostream& os) const {
        for (const auto& c : checks)
            os << (c.pass ? "PASS " : "FAIL ") << c.name << "  measured=" << format_number(c.measured)
               << "  tolerance=" << format_number(c.tolerance) << '\n';
        os << (all_passed() ? "all checks passed" : "some checks FAILED") << '\n';
    }
};

struct VerifyOptions {
    // Multiplies every tolerance; 0 makes every check with nonzero error fail
    // (harness self-test).
    double tolerance_scale{1.0};
    unsigned seed{20240601};
};

namespace detail {

inline double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-12);
}

inline void add_check(VerifyReport& r, std::string name, double measured, double tol, double scale) {
    const double t = tol * scale;
    r.checks.push_back({std::move(name), measured, t, measured <= t});
}

} // namespace detail

inline VerifyReport run_verify(const VerifyOptions& opt = {}) {
    VerifyReport report;
    const double k = opt.tolerance_scale;
    std::mt19937 rng(opt.seed);

    {
        double worst = 0.0;
        for (double s : {0.5, 1.0, 3.0})
            for (double eta : {0.1, 0.5}) {
                const SpectralParams p{s, eta, 1.0};
                for (int i = 0; i < 50; ++i) {
                    const double t = 30.0 * i / 49.0;
                    worst = std::max(worst, detail::rel_err(gamma0_analytic(p, t), gamma0_quadrature(p, t)));
                }
            }
        detail::add_check(report, "gamma0 closed form vs quadrature (max rel err)", worst, 1e-6, k);
    }
    {
        double worst = 0.0;
        for (std::size_t n : {1u, 2u, 5u, 10u})
            for (double s : {1.0, 3.0}) {
                const SpectralParams p{s, 0.5, 1.0};
                const auto sched = pdd_schedule(n, 10.0);
                const ControlledGamma<FreeDecoherence> g(FreeDecoherence(p), sched);
                for (int i = 0; i <= 20; ++i) {
                    const double t = 20.0 * i / 20.0 + 0.37;
                    worst = std::max(worst, detail::rel_err(g(t), controlled_gamma_quadrature(p, sched, t)));
                }
            }
        detail::add_check(report, "controlled gamma vs filter-function quadrature (max rel err)", worst, 1e-5, k);
    }
    {
        const SpectralParams p{1.0, 0.5, 1.0};
        const PulseSchedule sched({5.0}, 10.0);
        const double expected = std::log(26.0) - 0.25 * std::log(101.0);
        detail::add_check(report, "single-pulse anchor Gamma(10)", std::abs(controlled_gamma(p, sched, 10.0) - expected),
                          1e-6, k);
    }
    {
        double worst = 0.0;
        std::uniform_real_distribution<double> u(0.05, 9.95);
        std::uniform_int_distribution<int> count(1, 8);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> tau(static_cast<std::size_t>(count(rng)));
            for (auto& v : tau) v = u(rng);
            std::sort(tau.begin(), tau.end());
            tau.erase(std::unique(tau.begin(), tau.end()), tau.end());
            const SpectralParams p{trial % 2 ? 3.0 : 1.0, 0.5, 1.0};
            const ControlledGamma<FreeDecoherence> g(FreeDecoherence(p), PulseSchedule(tau, 10.0));
            const double eps = 1e-6;
            for (double tj : tau) {
                const double slope = std::max({1.0, std::abs(g.rate(tj - eps)), std::abs(g.rate(tj + eps))});
                worst = std::max(worst, std::abs(g(tj - eps) - g(tj + eps)) / slope);
            }
        }
        detail::add_check(report, "continuity of Gamma at pulse instants (jump / local slope)", worst, 1e-4, k);
    }
    {
        double worst_square = 0.0;
        double worst_sym = 0.0;
        for (double s : {1.0, 3.0})
            for (std::size_t n : {0u, 10u, 20u, 100u}) {
                const SpectralParams p{s, 0.5, 1.0};
                const auto sched = pdd_schedule(n, 10.0);
                const auto m00 = DephasingModel({ProtocolTag::Q00, sched}, p);
                const auto m10 = DephasingModel({ProtocolTag::Q10, sched}, p);
                const auto m01 = DephasingModel({ProtocolTag::Q01, sched}, p);
                const auto m11 = DephasingModel({ProtocolTag::Q11, sched}, p);
                for (int i = 0; i <= 300; ++i) {
                    const double t = 30.0 * i / 300.0;
                    const double q10 = m10.q(t);
                    worst_square = std::max(worst_square, std::abs(q10 * q10 - m00.q(t) * m11.q(t)));
                    worst_sym = std::max(worst_sym, std::abs(q10 - m01.q(t)));
                }
            }
        detail::add_check(report, "Q10^2 = Q00 Q11", worst_square, 1e-12, k);
        detail::add_check(report, "Q01 = Q10", worst_sym, 1e-15, k);
    }
    {
        double worst = 0.0;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            std::array<double, 4> d{};
            double sum = 0.0;
            for (auto& v : d) sum += (v = u(rng) + 1e-3);
            for (auto& v : d) v /= sum;
            const cplx a14 = std::polar(u(rng) * std::sqrt(d[0] * d[3]), 6.283185307179586 * u(rng));
            const cplx a23 = std::polar(u(rng) * std::sqrt(d[1] * d[2]), 6.283185307179586 * u(rng));
            const TwoQubitState rho0 = make_x_state(d, a14, a23);
            for (double q : {0.0, 0.3, 0.7, 1.0}) {
                XStateSummary x = x_summary(rho0, q);
                const Attenuation att{std::sqrt(q), std::sqrt(q), q};
                worst = std::max(worst,
                                 std::abs(concurrence_x_exact(x) - concurrence_wootters(two_qubit_evolve(rho0, att))));
            }
        }
        detail::add_check(report, "evolved X-state concurrence vs Wootters", worst, 1e-10, k);
    }
    {
        // C_t = C_0 |Q| on its domain of validity: no population product competes with the coherence.
        double worst = 0.0;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            const double a = u(rng);
            const cplx c = std::polar(u(rng) * std::sqrt(a * (1.0 - a)), 6.283185307179586 * u(rng));
            const TwoQubitState rho0 = trial % 2 ? make_x_state({a, 0.0, 0.0, 1.0 - a}, c, 0.0)
                                                 : make_x_state({0.0, a, 1.0 - a, 0.0}, 0.0, c);
            for (double q : {0.0, 0.3, 0.7, 1.0}) {
                const Attenuation att{std::sqrt(q), std::sqrt(q), q};
                worst = std::max(worst, std::abs(concurrence_x(x_summary(rho0, q)) -
                                                 concurrence_wootters(two_qubit_evolve(rho0, att))));
            }
        }
        detail::add_check(report, "C_0 |Q| vs Wootters (single-coherence X-states)", worst, 1e-10, k);
    }
    {
        double worst_consistency = 0.0;
        double worst_baseline = 0.0;
        double worst_order = 0.0;
        const TwoQubitState singlet = TwoQubitState::singlet();
        for (double s : {1.0, 3.0})
            for (ProtocolTag tag : {ProtocolTag::Q00, ProtocolTag::Q10, ProtocolTag::Q11}) {
                ScenarioConfig cfg;
                cfg.s = s;
                cfg.n_pulses = 10;
                cfg.min_grid_steps = 300;
                cfg.steps_per_interval = 8;
                const auto sched = pdd_schedule(10, cfg.tau_f);
                const DephasingModel model({tag, sched}, cfg.spectral());
                const auto grid = build_grid(cfg, sched);
                const auto series = qsl_series(singlet, model, grid);
                for (std::size_t i = 1; i < grid.size(); ++i) {
                    worst_consistency = std::max(
                        worst_consistency, detail::rel_err(series.general[i] / grid[i], series.ratio[i]));
                    worst_order = std::max({worst_order, series.ratio[i] - series.upper_bound[i],
                                            series.ratio[i] - 1.0 - 1e-9});
                    if (tag == ProtocolTag::Q00 && s == 1.0)
                        worst_baseline = std::max(worst_baseline, std::abs(series.ratio[i] - 1.0));
                }
            }
        detail::add_check(report, "singlet QSL: general route / tau_d vs closed-form ratio", worst_consistency, 1e-6, k);
        detail::add_check(report, "uncontrolled Ohmic singlet ratio = 1", worst_baseline, 1e-6, k);
        detail::add_check(report, "ratio <= upper bound and ratio <= 1 (max violation)", std::max(0.0, worst_order),
                          0.0, k);
    }
    return report;
}

} // namespace pddqsl
