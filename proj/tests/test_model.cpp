#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "adiapass/model.hpp"
#include "oracles.hpp"

using namespace adiapass;

namespace {

const PulseSchedule long_window{20.0, 5.0 / 375.0, 375.0};
const SystemConfig baseline{{0.8, 1.0}, {20.0, 5.0 / 400.0, 400.0}};

}  // namespace

TEST(GateVoltage, LeftPulsePeakAndTail) {
    EXPECT_DOUBLE_EQ(gate_voltage_left(long_window, 0.0), -20.0);
    // -20 exp(-12.5), evaluated in 30-digit arithmetic
    EXPECT_NEAR(gate_voltage_left(long_window, 375.0), -7.453306344157342e-5, 1e-17);
    EXPECT_EQ(gate_voltage_left({0.0, 0.3, 10.0}, 1.7), 0.0);
}

TEST(GateVoltage, RightPulseMirrorsLeft) {
    EXPECT_DOUBLE_EQ(gate_voltage_right(long_window, 375.0), -20.0);
    EXPECT_NEAR(gate_voltage_right(long_window, 0.0), -7.453306344157342e-5, 1e-17);
    for (double t = -100.0; t <= 500.0; t += 7.3)
        EXPECT_NEAR(gate_voltage_right(long_window, t), gate_voltage_left(long_window, long_window.tau - t), 1e-12);
}

TEST(GateVoltage, BoundedByPeakDepth) {
    for (double t = -400.0; t <= 800.0; t += 3.1) {
        for (double v : {gate_voltage_left(long_window, t), gate_voltage_right(long_window, t)}) {
            EXPECT_LE(v, 0.0);
            EXPECT_GE(v, -long_window.mu0);
        }
    }
}

TEST(GateVoltageRates, VanishAtPeaks) {
    const auto [dl, dr] = gate_voltage_rates(long_window, 0.0);
    EXPECT_EQ(dl, 0.0);
    const double a2 = long_window.alpha * long_window.alpha;
    EXPECT_DOUBLE_EQ(dr, -long_window.mu0 * a2 * long_window.tau * std::exp(-0.5 * a2 * long_window.tau * long_window.tau));
}

TEST(GateVoltageRates, MidpointValueAndFiniteDifference) {
    // 20 (5/375)^2 187.5 exp(-3.125), 30-digit evaluation
    const double expected = 0.029291289082271612;
    const double analytic = gate_voltage_rates(long_window, 187.5).first;
    EXPECT_NEAR(analytic, expected, 1e-15);
    const double fd = oracle::central_difference([](double t) { return gate_voltage_left(long_window, t); }, 187.5, 1e-4);
    EXPECT_NEAR(fd, analytic, 1e-8 * std::abs(analytic));
}

TEST(GateVoltageRates, Antisymmetry) {
    for (double t = 0.0; t <= long_window.tau; t += 12.5)
        EXPECT_NEAR(gate_voltage_rates(long_window, t).second, -gate_voltage_rates(long_window, long_window.tau - t).first, 1e-14);
}

TEST(Hamiltonian, EntriesAtStart) {
    const SystemConfig c{{0.8, 1.0}, long_window};
    const auto h = hamiltonian_at(c, 0.0);
    EXPECT_DOUBLE_EQ(h(0, 0), -20.0);
    EXPECT_EQ(h(0, 1), 0.8);
    EXPECT_EQ(h(1, 0), 0.8);
    EXPECT_EQ(h(1, 1), 0.0);
    EXPECT_EQ(h(1, 2), 1.0);
    EXPECT_EQ(h(0, 2), 0.0);
    EXPECT_NEAR(h(2, 2), -7.453306344157342e-5, 1e-17);
}

TEST(Hamiltonian, ZeroParametersGiveZeroMatrix) {
    const SystemConfig c{{0.0, 0.0}, {0.0, 0.1, 10.0}};
    EXPECT_EQ(hamiltonian_at(c, 3.0), HermitianMatrix3::zero());
    EXPECT_EQ(hamiltonian_rate_at(c, 3.0), HermitianMatrix3::zero());
}

TEST(Hamiltonian, AlwaysRealSymmetricWithEmptyCorner) {
    std::mt19937_64 rng{7};
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
        const SystemConfig c{{u(rng), u(rng)}, {std::abs(u(rng)) * 4, 0.01 + std::abs(u(rng)), 1.0 + 50 * std::abs(u(rng))}};
        const double t = 20.0 * u(rng);
        const auto h = hamiltonian_at(c, t);
        EXPECT_EQ(h, adjoint(h));
        EXPECT_EQ(h(0, 2), 0.0);
        EXPECT_EQ(h(2, 0), 0.0);
    }
}

TEST(HamiltonianRate, MatchesFiniteDifferences) {
    const double delta = 1e-4;
    for (int k = 0; k < 100; ++k) {
        const double t = baseline.schedule.tau * k / 99.0;
        const auto fd = (1.0 / (2.0 * delta)) * (hamiltonian_at(baseline, t + delta) - hamiltonian_at(baseline, t - delta));
        EXPECT_LE(max_abs(fd - hamiltonian_rate_at(baseline, t)), 1e-6) << "t = " << t;
    }
}

TEST(HamiltonianRate, DiagonalWithStillLeftPulseAtStart) {
    const auto r = hamiltonian_rate_at(baseline, 0.0);
    EXPECT_EQ(r(0, 0), 0.0);
    EXPECT_EQ(r(1, 1), 0.0);
    EXPECT_EQ(r(2, 2), gate_voltage_rates(baseline.schedule, 0.0).second);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) {
                EXPECT_EQ(r(i, j), 0.0);
            }
}

TEST(Hamiltonian, ReflectionSymmetryForEqualCouplings) {
    const SystemConfig c{{0.9, 0.9}, long_window};
    const auto p = reversal<double>();
    for (double t = 0.0; t <= c.schedule.tau; t += 15.0)
        EXPECT_LE(max_abs(p * hamiltonian_at(c, t) * p - hamiltonian_at(c, c.schedule.tau - t)), 1e-12);
}

TEST(Config, ValidationRejectsOutOfDomainValues) {
    EXPECT_THROW((PulseSchedule{-1.0, 0.1, 10.0}.validate()), InvalidParameter);
    EXPECT_THROW((PulseSchedule{1.0, 0.0, 10.0}.validate()), InvalidParameter);
    EXPECT_THROW((PulseSchedule{1.0, 0.1, 0.0}.validate()), InvalidParameter);
    EXPECT_THROW((CouplingPair{std::nan(""), 1.0}.validate()), InvalidParameter);
    EXPECT_NO_THROW((SystemConfig{{-0.8, -1.0}, long_window}.validate()));
}

TEST(Config, OverlapWarningBelowWidthRatioThree) {
    EXPECT_FALSE(overlap_warning(PulseSchedule::with_alpha_over_tau(20.0, 3.0, 400.0)));
    EXPECT_TRUE(overlap_warning(PulseSchedule::with_alpha_over_tau(20.0, 2.5, 400.0)));
}
