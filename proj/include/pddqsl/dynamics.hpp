// dynamics.hpp: exact pure-dephasing evolution of one and two qubits and the
// attenuation factors P^1, P^2, Q = P^1 P^2 for the four control protocols
//
// Basis order is |00>,|01>,|10>,|11> (0-based indices 0..3) and qubit 1 is the
// rightmost bit of the label: index = 2*b2 + b1. Coherences attenuate as
//   rho_12, rho_34 x P^1;  rho_13, rho_24 x P^2;  rho_14, rho_23 x P^1 P^2
// which is the tensor product of the two single-qubit dephasing channels.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pddqsl/errors.hpp"
#include "pddqsl/pulses.hpp"
#include "pddqsl/spectral.hpp"

namespace pddqsl {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

struct DensityTolerance {
    double hermitian{1e-12};
    double trace{1e-12};
    double min_eigenvalue{-1e-10};
};

// Throws InvalidStateError unless rho is Hermitian, unit trace and PSD.
template <class Derived>
void validate_density(const Eigen::MatrixBase<Derived>& rho, const DensityTolerance& tol = {}) {
    if (rho.rows() != rho.cols()) throw InvalidStateError("density matrix must be square");
    if (!rho.allFinite()) throw InvalidStateError("density matrix has non-finite entries");
    const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol.hermitian) throw InvalidStateError("density matrix is not Hermitian");
    const cplx tr = rho.trace();
    if (std::abs(tr - 1.0) > tol.trace) throw InvalidStateError("density matrix trace differs from 1");
    using Mat = Eigen::Matrix<cplx, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
    const Mat herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenSolverError("eigenvalue check did not converge");
    if (es.eigenvalues().minCoeff() < tol.min_eigenvalue)
        throw InvalidStateError("density matrix is not positive semidefinite");
}

class TwoQubitState {
public:
    explicit TwoQubitState(const Matrix4c& rho, const DensityTolerance& tol = {}) : rho_(rho) {
        validate_density(rho_, tol);
    }

    const Matrix4c& matrix() const noexcept { return rho_; }
    // 0-based entry access.
    cplx operator()(int i, int j) const { return rho_(i, j); }

    // Only the main diagonal and anti-diagonal are nonzero (within tol).
    bool is_x_form(double tol = 1e-12) const {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j && i + j != 3 && std::abs(rho_(i, j)) > tol) return false;
        return true;
    }

    double purity() const { return (rho_ * rho_).trace().real(); }

    // (|01> - |10>)/sqrt2
    static TwoQubitState singlet() {
        Matrix4c m = Matrix4c::Zero();
        m(1, 1) = m(2, 2) = 0.5;
        m(1, 2) = m(2, 1) = -0.5;
        return TwoQubitState(m);
    }

    // (|00> + |11>)/sqrt2
    static TwoQubitState bell_phi_plus() {
        Matrix4c m = Matrix4c::Zero();
        m(0, 0) = m(3, 3) = 0.5;
        m(0, 3) = m(3, 0) = 0.5;
        return TwoQubitState(m);
    }

    static TwoQubitState product_00() {
        Matrix4c m = Matrix4c::Zero();
        m(0, 0) = 1.0;
        return TwoQubitState(m);
    }

    static TwoQubitState maximally_mixed() { return TwoQubitState(Matrix4c::Identity() * 0.25); }

private:
    Matrix4c rho_;
};

// X-state from its diagonal (rho_11..rho_44) and the two anti-diagonal coherences.
inline TwoQubitState make_x_state(const std::array<double, 4>& diag, cplx a14, cplx a23) {
    Matrix4c m = Matrix4c::Zero();
    for (int i = 0; i < 4; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
    m(0, 3) = a14;
    m(3, 0) = std::conj(a14);
    m(1, 2) = a23;
    m(2, 1) = std::conj(a23);
    return TwoQubitState(m);
}

// Kraus pair of the single-qubit dephasing channel with coherence factor gamma = e^{-Gamma}:
// E1 = sqrt((1+gamma)/2) I, E2 = sqrt((1-gamma)/2) sigma_z.
inline std::array<Matrix2c, 2> dephasing_kraus(double gamma) {
    Matrix2c sz = Matrix2c::Zero();
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    return {Matrix2c(Matrix2c::Identity() * std::sqrt(0.5 * (1.0 + gamma))),
            Matrix2c(sz * std::sqrt(0.5 * (1.0 - gamma)))};
}

// rho(t) = sum_i E_i rho0 E_i^dagger with gamma = exp(-decoherence).
inline Matrix2c single_qubit_evolve(const Matrix2c& rho0, double decoherence) {
    validate_density(rho0);
    if (!(decoherence >= 0.0)) throw DomainError("single_qubit_evolve: decoherence exponent must be >= 0");
    const auto kraus = dephasing_kraus(std::exp(-decoherence));
    Matrix2c out = Matrix2c::Zero();
    for (const auto& e : kraus) out += e * rho0 * e.adjoint();
    return out;
}

enum class ProtocolTag { Q00, Q10, Q01, Q11 };

inline std::string_view to_string(ProtocolTag tag) {
    switch (tag) {
    case ProtocolTag::Q00: return "Q00";
    case ProtocolTag::Q10: return "Q10";
    case ProtocolTag::Q01: return "Q01";
    case ProtocolTag::Q11: return "Q11";
    }
    return "?";
}

inline std::optional<ProtocolTag> parse_protocol(std::string_view s) {
    for (auto tag : {ProtocolTag::Q00, ProtocolTag::Q10, ProtocolTag::Q01, ProtocolTag::Q11})
        if (s == to_string(tag)) return tag;
    return std::nullopt;
}

// Which qubits receive the (shared) pulse schedule.
struct ControlProtocol {
    ProtocolTag tag{ProtocolTag::Q00};
    PulseSchedule schedule{};

    // qubit is 1 or 2
    bool pulsed(int qubit) const {
        switch (tag) {
        case ProtocolTag::Q00: return false;
        case ProtocolTag::Q10: return qubit == 1;
        case ProtocolTag::Q01: return qubit == 2;
        case ProtocolTag::Q11: return true;
        }
        return false;
    }
};

struct Attenuation {
    double p1{1.0};
    double p2{1.0};
    double q{1.0};  // p1 * p2

    static Attenuation from_exponents(double gamma1, double gamma2) {
        Attenuation a;
        a.p1 = std::exp(-std::max(gamma1, 0.0));
        a.p2 = std::exp(-std::max(gamma2, 0.0));
        a.q = a.p1 * a.p2;
        return a;
    }
};

// Two independent baths with a control protocol. Per-qubit controlled
// decoherence functions are built once (schedule sums cached).
class DephasingModel {
public:
    DephasingModel(ControlProtocol protocol, SpectralParams bath1, SpectralParams bath2)
        : protocol_(std::move(protocol)), free_{FreeDecoherence(bath1), FreeDecoherence(bath2)} {
        for (int q = 1; q <= 2; ++q)
            if (protocol_.pulsed(q))
                controlled_[static_cast<std::size_t>(q - 1)].emplace(free_[static_cast<std::size_t>(q - 1)],
                                                                     protocol_.schedule);
    }

    DephasingModel(ControlProtocol protocol, SpectralParams shared)
        : DephasingModel(std::move(protocol), shared, shared) {}

    // Gamma_mu(t) for qubit mu in {1, 2}.
    double gamma(int qubit, double t) const {
        const auto i = index(qubit);
        return controlled_[i] ? controlled_[i]->value(t) : free_[i].value(t);
    }

    double gamma_rate(int qubit, double t) const {
        const auto i = index(qubit);
        return controlled_[i] ? controlled_[i]->rate(t) : free_[i].rate(t);
    }

    Attenuation attenuation(double t) const {
        detail::check_time(t, "attenuation");
        return Attenuation::from_exponents(gamma(1, t), gamma(2, t));
    }

    double q(double t) const { return attenuation(t).q; }

    // dQ/dt = -Q (dGamma_1/dt + dGamma_2/dt); left limit at pulse instants.
    double q_dot(double t) const { return -q(t) * (gamma_rate(1, t) + gamma_rate(2, t)); }

    // Instants where Q is not differentiable.
    std::span<const double> breakpoints() const {
        if (protocol_.tag == ProtocolTag::Q00) return {};
        return protocol_.schedule.instants();
    }

    const ControlProtocol& protocol() const noexcept { return protocol_; }

private:
    static std::size_t index(int qubit) {
        if (qubit != 1 && qubit != 2) throw DomainError("qubit index must be 1 or 2");
        return static_cast<std::size_t>(qubit - 1);
    }

    ControlProtocol protocol_;
    std::array<FreeDecoherence, 2> free_;
    std::array<std::optional<ControlledGamma<FreeDecoherence>>, 2> controlled_;
};

// P^mu = exp(-Gamma_mu), Gamma_mu controlled if qubit mu is pulsed; both baths share p.
inline Attenuation attenuation(const ControlProtocol& protocol, const SpectralParams& p, double t) {
    return DephasingModel(protocol, p).attenuation(t);
}

// Element-wise dephasing of a two-qubit state.
inline TwoQubitState two_qubit_evolve(const TwoQubitState& rho0, const Attenuation& att) {
    Matrix4c m = rho0.matrix();
    auto scale = [&m](int i, int j, double f) {
        m(i, j) *= f;
        m(j, i) *= f;
    };
    scale(0, 1, att.p1);
    scale(2, 3, att.p1);
    scale(0, 2, att.p2);
    scale(1, 3, att.p2);
    scale(0, 3, att.q);
    scale(1, 2, att.q);
    return TwoQubitState(m);
}

} // namespace pddqsl
