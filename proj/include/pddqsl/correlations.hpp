// correlations.hpp: concurrence, quantum consonance, singlet discord and
// relative purity of dephased two-qubit states

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "pddqsl/dynamics.hpp"
#include "pddqsl/errors.hpp"

namespace pddqsl {

// Initial X-state entries plus the current attenuation Q(t).
struct XStateSummary {
    std::array<double, 4> d{0.25, 0.25, 0.25, 0.25};
    cplx a14{0.0, 0.0};
    cplx a23{0.0, 0.0};
    double q{1.0};

    void validate(double tol = 1e-12) const {
        double sum = 0.0;
        for (double v : d) {
            if (!(v >= -tol)) throw InvalidStateError("X-state diagonal entries must be >= 0");
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol) throw InvalidStateError("X-state diagonal must sum to 1");
        if (std::abs(a14) > std::sqrt(std::max(0.0, d[0] * d[3])) + tol)
            throw InvalidStateError("X-state |rho14| exceeds sqrt(rho11 rho44)");
        if (std::abs(a23) > std::sqrt(std::max(0.0, d[1] * d[2])) + tol)
            throw InvalidStateError("X-state |rho23| exceeds sqrt(rho22 rho33)");
    }

    TwoQubitState initial_state() const { return make_x_state(d, a14, a23); }
};

inline XStateSummary x_summary(const TwoQubitState& rho0, double q = 1.0) {
    if (!rho0.is_x_form()) throw DomainError("x_summary: state is not of X form");
    XStateSummary x;
    for (int i = 0; i < 4; ++i) x.d[static_cast<std::size_t>(i)] = rho0(i, i).real();
    x.a14 = rho0(0, 3);
    x.a23 = rho0(1, 2);
    x.q = q;
    return x;
}

// C_t = C_0 |Q|, C_0 = 2 max{0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44)}.
inline double concurrence_x(const XStateSummary& x) {
    x.validate();
    const double c0 = 2.0 * std::max({0.0, std::abs(x.a14) - std::sqrt(x.d[1] * x.d[2]),
                                      std::abs(x.a23) - std::sqrt(x.d[0] * x.d[3])});
    return c0 * std::abs(x.q);
}

// Concurrence of the evolved X-state itself, with Q inside the max:
// 2 max{0, |Q rho14| - sqrt(rho22 rho33), |Q rho23| - sqrt(rho11 rho44)}.
// Agrees with concurrence_x when Q = 1 or the competing population products vanish.
inline double concurrence_x_exact(const XStateSummary& x) {
    x.validate();
    const double q = std::abs(x.q);
    return 2.0 * std::max({0.0, q * std::abs(x.a14) - std::sqrt(x.d[1] * x.d[2]),
                           q * std::abs(x.a23) - std::sqrt(x.d[0] * x.d[3])});
}

namespace detail {

inline Matrix4c psd_sqrt(const Matrix4c& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (rho + rho.adjoint()));
    if (es.info() != Eigen::Success) throw EigenSolverError("concurrence: eigen decomposition failed");
    const Eigen::Vector4d root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace detail

// Wootters: sqrt(lambda_i) of rho (sy x sy) rho* (sy x sy) are the singular values
// of sqrt(rho) sqrt(rho~), rho~ = (sy x sy) rho* (sy x sy); C = max{0, l1 - l2 - l3 - l4}.
inline double concurrence_wootters(const TwoQubitState& rho) {
    Matrix4c flip = Matrix4c::Zero();
    flip(0, 3) = flip(3, 0) = -1.0;
    flip(1, 2) = flip(2, 1) = 1.0;
    const Matrix4c tilde = flip * rho.matrix().conjugate() * flip;
    const Matrix4c a = detail::psd_sqrt(rho.matrix()) * detail::psd_sqrt(tilde);
    Eigen::JacobiSVD<Matrix4c> svd(a);
    const Eigen::Vector4d sv = svd.singularValues();  // descending
    return std::max(0.0, sv(0) - sv(1) - sv(2) - sv(3));
}

// QC_t = QC_0 Q, QC_0 = 2 Re(rho14 + rho23). Signed (the singlet gives -1).
inline double consonance(const XStateSummary& x) {
    x.validate();
    return 2.0 * (x.a14 + x.a23).real() * x.q;
}

// H(p) in bits.
inline double binary_entropy(double p) {
    auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
    return term(p) + term(1.0 - p);
}

// QD = 1 - H((1 + |q|)/2), singlet initial state only.
inline double discord_singlet(double q, double clamp_tol = 1e-12) {
    if (!(q >= -clamp_tol) || !(q <= 1.0 + clamp_tol))
        throw DomainError("discord_singlet: q must lie in [0, 1]");
    q = std::clamp(q, 0.0, 1.0);
    return 1.0 - binary_entropy(0.5 * (1.0 + q));
}

// f = tr[rho_final rho_initial] / tr(rho_initial^2)
inline double relative_purity(const TwoQubitState& rho_initial, const TwoQubitState& rho_final) {
    const double overlap = (rho_final.matrix() * rho_initial.matrix()).trace().real();
    return overlap / rho_initial.purity();
}

inline double purity(const TwoQubitState& rho) { return rho.purity(); }

} // namespace pddqsl
