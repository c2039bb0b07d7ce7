#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pddqsl/correlations.hpp"

using namespace pddqsl;

namespace {

XStateSummary singlet_at(double q) { return x_summary(TwoQubitState::singlet(), q); }

Attenuation symmetric(double q) { return Attenuation{std::sqrt(q), std::sqrt(q), q}; }

} // namespace

TEST(ConcurrenceX, Examples) {
    EXPECT_NEAR(concurrence_x(singlet_at(1.0)), 1.0, 1e-15);
    EXPECT_NEAR(concurrence_x(singlet_at(0.5)), 0.5, 1e-15);
    EXPECT_EQ(concurrence_x(x_summary(TwoQubitState::product_00())), 0.0);
    EXPECT_EQ(concurrence_x(x_summary(TwoQubitState::maximally_mixed())), 0.0);
}

TEST(ConcurrenceX, RejectsNonPhysicalSummary) {
    XStateSummary x;
    x.d = {0.25, 0.25, 0.25, 0.25};
    x.a23 = 0.4;
    EXPECT_THROW(concurrence_x(x), InvalidStateError);
    std::mt19937 rng(1);
    EXPECT_THROW(x_summary(oracle::random_state(rng)), DomainError);
}

TEST(ConcurrenceWootters, Examples) {
    EXPECT_NEAR(concurrence_wootters(TwoQubitState::singlet()), 1.0, 1e-12);
    EXPECT_NEAR(concurrence_wootters(TwoQubitState::bell_phi_plus()), 1.0, 1e-12);
    EXPECT_NEAR(concurrence_wootters(TwoQubitState::product_00()), 0.0, 1e-12);
    EXPECT_NEAR(concurrence_wootters(two_qubit_evolve(TwoQubitState::singlet(), symmetric(0.5))), 0.5, 1e-12);
}

TEST(ConcurrenceXExact, MatchesWoottersOnRandomXStates) {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rho0 = oracle::random_x_state(rng);
        for (double q : {0.0, 0.3, 0.7, 1.0}) {
            const double closed = concurrence_x_exact(x_summary(rho0, q));
            const double dense = concurrence_wootters(two_qubit_evolve(rho0, symmetric(q)));
            EXPECT_NEAR(closed, dense, 1e-10) << "trial " << trial << " q=" << q;
        }
        EXPECT_NEAR(concurrence_x(x_summary(rho0, 1.0)), concurrence_x_exact(x_summary(rho0, 1.0)), 1e-15);
    }
}

TEST(ConcurrenceX, MatchesWoottersWhenCompetingPopulationsVanish) {
    // C_t = C_0 |Q| holds when the population product subtracted from the
    // dominant coherence is zero, e.g. d = (a, 0, 0, 1 - a) or (0, b, 1 - b, 0).
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = u(rng);
        const double r = u(rng);
        const double phase = 6.283185307179586 * u(rng);
        const bool outer = trial % 2 == 0;
        const std::array<double, 4> d = outer ? std::array<double, 4>{a, 0.0, 0.0, 1.0 - a}
                                              : std::array<double, 4>{0.0, a, 1.0 - a, 0.0};
        const double radius = r * std::sqrt(a * (1.0 - a));
        const auto rho0 = outer ? make_x_state(d, std::polar(radius, phase), 0.0)
                                : make_x_state(d, 0.0, std::polar(radius, phase));
        for (double q : {0.0, 0.3, 0.7, 1.0})
            EXPECT_NEAR(concurrence_x(x_summary(rho0, q)),
                        concurrence_wootters(two_qubit_evolve(rho0, symmetric(q))), 1e-10);
    }
}

TEST(ConcurrenceX, OverestimatesWhenPopulationsCompete) {
    const auto rho0 = make_x_state({0.3, 0.2, 0.2, 0.3}, 0.3, 0.0);
    EXPECT_NEAR(concurrence_x(x_summary(rho0, 1.0)), 0.2, 1e-15);
    EXPECT_NEAR(concurrence_x(x_summary(rho0, 0.5)), 0.1, 1e-15);
    EXPECT_EQ(concurrence_x_exact(x_summary(rho0, 0.5)), 0.0);
    EXPECT_NEAR(concurrence_wootters(two_qubit_evolve(rho0, symmetric(0.5))), 0.0, 1e-10);
}

TEST(Consonance, Examples) {
    EXPECT_NEAR(consonance(singlet_at(1.0)), -1.0, 1e-15);
    EXPECT_NEAR(std::abs(consonance(singlet_at(1.0))), 1.0, 1e-15);
    EXPECT_NEAR(consonance(x_summary(TwoQubitState::bell_phi_plus())), 1.0, 1e-15);
    EXPECT_NEAR(consonance(singlet_at(0.25)), -0.25, 1e-15);
    EXPECT_EQ(consonance(x_summary(TwoQubitState::product_00())), 0.0);
}

TEST(DiscordSinglet, Examples) {
    EXPECT_NEAR(discord_singlet(1.0), 1.0, 1e-15);
    EXPECT_NEAR(discord_singlet(0.0), 0.0, 1e-15);
    EXPECT_NEAR(binary_entropy(0.75), 0.811278124459132864, 1e-15);
    EXPECT_NEAR(discord_singlet(0.5), 0.188721875540867136, 1e-12);
}

TEST(DiscordSinglet, MonotoneAndBounded) {
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double v = discord_singlet(i / 1000.0);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(DiscordSinglet, DomainAndClamping) {
    EXPECT_THROW(discord_singlet(-0.1), DomainError);
    EXPECT_THROW(discord_singlet(1.1), DomainError);
    EXPECT_NEAR(discord_singlet(1.0 + 1e-13), 1.0, 1e-15);
    EXPECT_NEAR(discord_singlet(-1e-13), 0.0, 1e-15);
}

TEST(RelativePurity, Examples) {
    const auto singlet = TwoQubitState::singlet();
    EXPECT_NEAR(relative_purity(singlet, singlet), 1.0, 1e-15);
    EXPECT_NEAR(relative_purity(singlet, two_qubit_evolve(singlet, symmetric(0.0))), 0.5, 1e-15);
    for (double q : {0.1, 0.4, 0.9})
        EXPECT_NEAR(relative_purity(singlet, two_qubit_evolve(singlet, symmetric(q))), 0.5 * (1.0 + q), 1e-15);
    const auto mixed = TwoQubitState::maximally_mixed();
    EXPECT_NEAR(relative_purity(mixed, two_qubit_evolve(mixed, symmetric(0.2))), 1.0, 1e-15);
    EXPECT_NEAR(purity(mixed), 0.25, 1e-15);
}

TEST(Correlations, DecayMonotonicallyWithoutControl) {
    const SpectralParams p{1.0, 0.5, 1.0};
    const ControlProtocol free{ProtocolTag::Q00, PulseSchedule({}, 10.0)};
    double c_prev = 2.0, qc_prev = 2.0, qd_prev = 2.0;
    for (int i = 0; i <= 300; ++i) {
        const double q = attenuation(free, p, 0.1 * i).q;
        const auto x = singlet_at(q);
        const double c = concurrence_x(x);
        const double qc = std::abs(consonance(x));
        const double qd = discord_singlet(q);
        EXPECT_LE(c, c_prev);
        EXPECT_LE(qc, qc_prev);
        EXPECT_LE(qd, qd_prev);
        c_prev = c;
        qc_prev = qc;
        qd_prev = qd;
    }
}
