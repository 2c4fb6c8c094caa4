#include <gtest/gtest.h>

#include "adiapass/dynamics.hpp"
#include "adiapass/perturbation.hpp"
#include "adiapass/spectral.hpp"

using namespace adiapass;

namespace {

SystemConfig baseline(double k) { return {{0.8, 1.0}, PulseSchedule::with_alpha_over_tau(20.0, k, 400.0)}; }

// The full-length runs are shared between tests.
const Trajectory& baseline_density() {
    static const Trajectory t = evolve_density(baseline(5.0), site_density(Site::left));
    return t;
}

const Trajectory& baseline_state() {
    static const Trajectory t = evolve_state(baseline(5.0), site_state(Site::left));
    return t;
}

}  // namespace

TEST(StepPlan, AutomaticRule) {
    const auto c = baseline(5.0);
    const auto plan = plan_steps(c, {});
    const double requested = 0.003 / 21.8;
    EXPECT_LE(plan.step, requested);
    EXPECT_GT(plan.step, 0.999 * requested);
    EXPECT_EQ(plan.n_steps % IntegratorOptions::default_samples, 0u);
    EXPECT_EQ(plan.n_steps / plan.stride, IntegratorOptions::default_samples);
    EXPECT_DOUBLE_EQ(plan.step * static_cast<double>(plan.n_steps), c.schedule.tau);

    // short windows are capped at tau / 20000
    const SystemConfig tiny{{0.01, 0.01}, {0.0, 1.0, 10.0}};
    EXPECT_DOUBLE_EQ(plan_steps(tiny, {}).step, 10.0 / 20000.0);
}

TEST(StepPlan, ExplicitStepAndStride) {
    IntegratorOptions o;
    o.step = 0.0025;
    o.sample_stride = 7;
    const auto plan = plan_steps(baseline(5.0), o);
    EXPECT_EQ(plan.n_steps, 160000u);
    EXPECT_EQ(plan.stride, 7u);
    o.step = 0.0;
    EXPECT_THROW(plan_steps(baseline(5.0), o), InvalidParameter);
    o.step = 401.0;
    EXPECT_THROW(plan_steps(baseline(5.0), o), InvalidParameter);
    o.step = 1.0;
    o.sample_stride = 0;
    EXPECT_THROW(plan_steps(baseline(5.0), o), InvalidParameter);
}

TEST(EvolveDensity, SamplesSpanTheWindow) {
    const auto& t = baseline_density();
    EXPECT_EQ(t.times.front(), 0.0);
    EXPECT_EQ(t.times.back(), 400.0);
    EXPECT_EQ(t.times.size(), IntegratorOptions::default_samples + 1);
    for (std::size_t k = 1; k < t.times.size(); ++k) EXPECT_GT(t.times[k], t.times[k - 1]);
    EXPECT_EQ(t.populations.front(), (std::array<double, 3>{1.0, 0.0, 0.0}));
}

TEST(EvolveDensity, ConservedQuantities) {
    const auto& t = baseline_density();
    EXPECT_LE(t.drift.trace, 1e-9);
    EXPECT_LE(t.drift.purity, 1e-8);
    EXPECT_LE(t.drift.hermiticity, 1e-10);
    EXPECT_LE(t.drift.imag_diagonal, 1e-12);
    EXPECT_GE(t.drift.min_eigenvalue, -1e-9);
    for (const auto& p : t.populations) EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-9);
}

TEST(EvolveDensity, WidePulsesReachReportedFidelity) {
    const auto& t = baseline_density();
    EXPECT_NEAR(transfer_fidelity(t), 0.995, 0.003);
    EXPECT_NEAR(t.final_populations()[0] + t.final_populations()[1], 0.005, 0.003);
}

TEST(EvolveDensity, DecoupledDotStaysPut) {
    const SystemConfig c{{0.0, 0.0}, PulseSchedule::with_alpha_over_tau(20.0, 5.0, 50.0)};
    const auto rho0 = site_density(Site::left);
    const auto t = evolve_density(c, rho0);
    for (const auto& rho : t.densities) EXPECT_LE(max_abs(rho - rho0), 1e-15);
}

TEST(EvolveDensity, DisconnectedLeftDotNeverTransfers) {
    SystemConfig c = baseline(5.0);
    c.couplings.j1 = 0.0;
    EXPECT_NEAR(transfer_fidelity(evolve_density(c, site_density(Site::left))), 0.0, 1e-9);
}

TEST(EvolveDensity, RejectsInvalidInitialState) {
    DensityMatrix rho = site_density(Site::left);
    rho(0, 0) = 0.5;
    EXPECT_THROW(evolve_density(baseline(5.0), rho), InvalidParameter);
    DensityMatrix mixed = 0.5 * (site_density(Site::left) + site_density(Site::right));
    EXPECT_THROW(evolve_density(baseline(5.0), mixed), InvalidParameter);
}

TEST(EvolveDensity, CoarseStepIsAnAccuracyError) {
    IntegratorOptions o;
    o.step = 0.2;
    try {
        evolve_density(baseline(5.0), site_density(Site::left), o);
        FAIL() << "expected IntegrationAccuracyError";
    } catch (const IntegrationAccuracyError& e) {
        EXPECT_FALSE(e.invariant().empty());
        EXPECT_GT(e.time(), 0.0);
    }
    o.check_invariants = false;
    const auto t = evolve_density(baseline(5.0), site_density(Site::left), o);
    EXPECT_GT(t.drift.purity, 1e-8);
}

TEST(EvolveState, MatchesDensityEvolution) {
    const auto& d = baseline_density();
    const auto& s = baseline_state();
    ASSERT_EQ(d.times, s.times);
    double worst = 0.0;
    for (std::size_t k = 0; k < d.times.size(); ++k)
        for (std::size_t i = 0; i < 3; ++i)
            worst = std::max(worst, std::abs(d.populations[k][i] - s.populations[k][i]));
    EXPECT_LE(worst, 1e-8);
    EXPECT_LE(s.drift.norm, 1e-9);
}

TEST(EvolveState, StaticDiagonalHamiltonianOnlyRotatesPhases) {
    const SystemConfig c{{0.0, 0.0}, PulseSchedule::with_alpha_over_tau(20.0, 5.0, 40.0)};
    StateVector psi0{{complex(0.6, 0.0), complex(0.0, 0.0), complex(0.0, 0.8)}};
    const auto t = evolve_state(c, psi0);
    for (const auto& p : t.populations) {
        EXPECT_NEAR(p[0], 0.36, 1e-9);
        EXPECT_NEAR(p[1], 0.0, 1e-15);
        EXPECT_NEAR(p[2], 0.64, 1e-9);
    }
    EXPECT_THROW(evolve_state(c, StateVector{{1.0, 1.0, 0.0}}), InvalidParameter);
}

TEST(EvolveState, CouplingSignIsAGauge) {
    SystemConfig flipped = baseline(5.0);
    flipped.couplings = {-0.8, -1.0};
    const auto a = baseline_state();
    const auto b = evolve_state(flipped, site_state(Site::left));
    for (std::size_t k = 0; k < a.times.size(); ++k)
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a.populations[k][i], b.populations[k][i], 1e-10);
}

TEST(EvolveDensity, EnergyTracksInstantaneousGroundState) {
    const auto c = baseline(5.0);
    const auto& t = baseline_density();
    const double budget = 1.0 - analytic_fidelity(0.8, 1.0, 20.0) + 0.01;
    for (std::size_t k = 0; k < t.times.size(); ++k) {
        const auto h = hamiltonian_at(c, t.times[k]);
        const auto es = eigensystem(h);
        EXPECT_LE(std::abs(energy_expectation(t.densities[k], h) - es.energies[0]), budget * es.gap())
            << "t = " << t.times[k];
    }
}

TEST(EvolveDensity, StepHalvingConverges) {
    const auto c = baseline(5.0);
    const double coarse = transfer_fidelity(baseline_density());
    IntegratorOptions o;
    o.step = baseline_density().plan.step / 2.0;
    const double fine = transfer_fidelity(evolve_density(c, site_density(Site::left), o));
    EXPECT_LE(std::abs(coarse - fine), 1e-7);
}

TEST(Rk4, FourthOrderOnComplexHermitianDrive) {
    // Constant complex Hermitian H with known spectrum: H = U diag(e) U^dagger.
    const double cs = std::cos(0.4), sn = std::sin(0.4);
    Matrix3<complex> u;
    u(0, 0) = cs;
    u(0, 1) = -sn * std::polar(1.0, 1.1);
    u(1, 0) = sn * std::polar(1.0, -1.1);
    u(1, 1) = cs;
    u(2, 2) = 1.0;
    const std::array<double, 3> e{-1.3, 0.2, 0.9};
    const auto h = u * Matrix3<complex>::diagonal(e[0], e[1], e[2]) * adjoint(u);
    const VonNeumannRhs<complex> rhs{h};

    StateVector psi{{complex(0.6, 0.0), complex(0.0, 0.8), 0.0}};
    const DensityMatrix rho0 = pure_density(psi);
    const double t_end = 3.0;

    auto exact = [&] {
        const DensityMatrix r = adjoint(u) * rho0 * u;
        DensityMatrix out;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) out(i, j) = r(i, j) * std::polar(1.0, -(e[i] - e[j]) * t_end);
        return u * out * adjoint(u);
    }();

    auto error_at = [&](int n) {
        const double step = t_end / n;
        DensityMatrix rho = rho0;
        for (int k = 0; k < n; ++k) rho = rk4_step(rho, step, rhs, rhs, rhs);
        EXPECT_LE(hermiticity_defect(rho), 1e-15);
        return max_abs(rho - exact);
    };
    const double e1 = error_at(30), e2 = error_at(60);
    EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.2);
}
