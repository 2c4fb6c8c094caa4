#pragma once

// Closed-system time evolution over [0, tau]: the von Neumann equation
// i drho/dt = [H, rho] and, as an independent cross-check, the Schroedinger
// equation i dpsi/dt = H psi. Both use fixed-step classical RK4 in complex
// double precision. No renormalization is applied; drift of the conserved
// quantities is checked at every sample point instead.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "adiapass/errors.hpp"
#include "adiapass/linalg.hpp"
#include "adiapass/model.hpp"

namespace adiapass {

using StateVector = Vector3<complex>;
using DensityMatrix = Matrix3<complex>;

inline StateVector site_state(Site s) { return StateVector::basis(static_cast<std::size_t>(s)); }

inline DensityMatrix pure_density(const StateVector& psi) { return outer(psi); }

inline DensityMatrix site_density(Site s) { return pure_density(site_state(s)); }

enum class Method { rk4 };

struct IntegratorOptions {
    /// Fixed step; nullopt selects the automatic rule.
    std::optional<double> step;
    /// Steps between stored samples; nullopt targets `default_samples` intervals.
    std::optional<std::size_t> sample_stride;
    Method method = Method::rk4;
    /// Throw IntegrationAccuracyError on drift; drift is recorded either way.
    bool check_invariants = true;

    static constexpr std::size_t default_samples = 2000;
};

/// Resolved discretization of [0, tau].
struct StepPlan {
    double step = 0.0;
    std::size_t n_steps = 0;
    std::size_t stride = 1;
};

/// Automatic step: h = min(0.003 / ||H||, tau / 20000) with
/// ||H|| = mu0 + |j1| + |j2|. RK4 damps unitary dynamics by roughly
/// (h w)^6 / 72 per step and mis-rotates coherences by (h w)^5 / 120;
/// the latter is not a unitary error and pushes the small eigenvalues of
/// rho negative. At 0.003 rad per step both stay below 1e-9 over a transfer.
inline constexpr double auto_step_phase = 0.003;

inline double auto_step(const SystemConfig& c) {
    const double scale = hamiltonian_scale(c);
    const double cap = c.schedule.tau / 20000.0;
    return scale > 0.0 ? std::min(auto_step_phase / scale, cap) : cap;
}

inline StepPlan plan_steps(const SystemConfig& c, const IntegratorOptions& opts) {
    const double tau = c.schedule.tau;
    double requested = auto_step(c);
    if (opts.step) {
        if (!(*opts.step > 0.0) || !std::isfinite(*opts.step))
            throw InvalidParameter("integrator step must be > 0");
        if (*opts.step > tau) throw InvalidParameter("integrator step must be <= tau");
        requested = *opts.step;
    }
    if (opts.sample_stride && *opts.sample_stride == 0)
        throw InvalidParameter("sample_stride must be a positive integer");

    // the 1e-12 slack keeps an explicit step of exactly tau/n from becoming n+1 steps
    auto n = static_cast<std::size_t>(std::ceil(tau / requested * (1.0 - 1e-12)));
    n = std::max<std::size_t>(n, 1);

    StepPlan plan;
    if (opts.sample_stride) {
        plan.stride = *opts.sample_stride;
    } else {
        constexpr std::size_t m = IntegratorOptions::default_samples;
        if (!opts.step && n >= m) n = (n + m - 1) / m * m;
        plan.stride = std::max<std::size_t>(1, n / m);
    }
    plan.n_steps = n;
    plan.step = tau / static_cast<double>(n);
    return plan;
}

/// Largest deviations of the conserved quantities seen at sample points.
struct InvariantDrift {
    double trace = 0.0;        ///< |tr rho - 1|
    double purity = 0.0;       ///< |tr rho^2 - 1|
    double norm = 0.0;         ///< |<psi|psi> - 1|
    double hermiticity = 0.0;  ///< max |rho - rho^dagger|
    double min_eigenvalue = 0.0;
    double imag_diagonal = 0.0;  ///< max |Im rho_ii|
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> densities;  ///< filled by evolve_density
    std::vector<StateVector> states;       ///< filled by evolve_state
    std::vector<std::array<double, 3>> populations;
    StepPlan plan;
    InvariantDrift drift;

    const std::array<double, 3>& final_populations() const { return populations.back(); }
};

/// One classical RK4 step. `f0`, `fm`, `f1` are the right-hand sides frozen
/// at the start, midpoint and end of the step.
template <typename State, typename Rhs>
State rk4_step(const State& y, double h, const Rhs& f0, const Rhs& fm, const Rhs& f1) {
    const State k1 = f0(y);
    const State k2 = fm(y + (0.5 * h) * k1);
    const State k3 = fm(y + (0.5 * h) * k2);
    const State k4 = f1(y + h * k3);
    State sum = k1;
    sum += 2.0 * k2;
    sum += 2.0 * k3;
    sum += k4;
    return y + (h / 6.0) * sum;
}

/// rho -> -i [H, rho]. Uses (H rho)^dagger = rho H, so the result is
/// Hermitian to the last bit whenever rho is. `Scalar` is the element type
/// of H: real for this model, complex for general Hermitian drives.
template <typename Scalar = double>
struct VonNeumannRhs {
    Matrix3<Scalar> h;

    DensityMatrix operator()(const DensityMatrix& rho) const {
        const DensityMatrix a = multiply(h, rho);
        DensityMatrix r;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                const complex x = a(i, j) - std::conj(a(j, i));
                r(i, j) = complex(x.imag(), -x.real());
            }
        return r;
    }
};

/// psi -> -i H psi
template <typename Scalar = double>
struct SchroedingerRhs {
    Matrix3<Scalar> h;

    StateVector operator()(const StateVector& psi) const {
        StateVector r = multiply(h, psi);
        for (auto& x : r.c) x = complex(x.imag(), -x.real());
        return r;
    }
};

namespace detail {

inline void check_density(const DensityMatrix& rho, double t, InvariantDrift& d, bool enforce) {
    const double herm = hermiticity_defect(rho);
    const double tr = std::abs(trace(rho) - 1.0);
    const double pur = std::abs(trace(rho * rho) - 1.0);
    double imag_diag = 0.0;
    for (std::size_t i = 0; i < 3; ++i) imag_diag = std::max(imag_diag, std::abs(rho(i, i).imag()));
    bool finite = true;
    for (const auto& x : rho.a) finite = finite && std::isfinite(x.real()) && std::isfinite(x.imag());
    const double min_ev = finite ? hermitian_eigenvalues(rho)[0] : -std::numeric_limits<double>::infinity();

    d.hermiticity = std::max(d.hermiticity, herm);
    d.trace = std::max(d.trace, tr);
    d.purity = std::max(d.purity, pur);
    d.imag_diagonal = std::max(d.imag_diagonal, imag_diag);
    d.min_eigenvalue = std::min(d.min_eigenvalue, min_ev);
    if (!enforce) return;
    if (!finite) throw IntegrationAccuracyError("finite entries", t, std::numeric_limits<double>::infinity());
    if (herm > 1e-10) throw IntegrationAccuracyError("hermiticity", t, herm);
    if (tr > 1e-9) throw IntegrationAccuracyError("trace", t, tr);
    if (pur > 1e-8) throw IntegrationAccuracyError("purity", t, pur);
    if (min_ev < -1e-9) throw IntegrationAccuracyError("positivity", t, -min_ev);
    if (imag_diag > 1e-12) throw IntegrationAccuracyError("real diagonal", t, imag_diag);
}

inline void check_state(const StateVector& psi, double t, InvariantDrift& d, bool enforce) {
    const double dn = std::abs(norm_sq(psi) - 1.0);
    d.norm = std::max(d.norm, dn);
    if (enforce && dn > 1e-9) throw IntegrationAccuracyError("norm", t, dn);
}

inline std::array<double, 3> populations_of(const DensityMatrix& rho) {
    return {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()};
}

inline std::array<double, 3> populations_of(const StateVector& psi) {
    return {std::norm(psi[0]), std::norm(psi[1]), std::norm(psi[2])};
}

/// Shared fixed-step driver; `record(k, t, y)` stores a sample.
template <typename State, typename Rhs, typename Record>
void integrate(const SystemConfig& c, const StepPlan& plan, State y, Record&& record) {
    const double h = plan.step;
    auto rhs_at = [&c](double t) { return Rhs{hamiltonian_at(c, t)}; };

    Rhs f0 = rhs_at(0.0);
    record(0.0, y);
    for (std::size_t k = 0; k < plan.n_steps; ++k) {
        const double t = h * static_cast<double>(k);
        const bool last = k + 1 == plan.n_steps;
        const double t_next = last ? c.schedule.tau : h * static_cast<double>(k + 1);
        const Rhs fm = rhs_at(t + 0.5 * h);
        Rhs f1 = rhs_at(t_next);
        y = rk4_step(y, h, f0, fm, f1);
        f0 = std::move(f1);
        if (last || (k + 1) % plan.stride == 0) record(t_next, y);
    }
}

}  // namespace detail

/// Integrate the von Neumann equation from rho0 at t = 0 to t = tau.
inline Trajectory evolve_density(const SystemConfig& c, const DensityMatrix& rho0,
                                 const IntegratorOptions& opts = {}) {
    c.validate();
    {
        InvariantDrift probe;
        try {
            detail::check_density(rho0, 0.0, probe, true);
        } catch (const IntegrationAccuracyError& e) {
            throw InvalidParameter("rho0 is not a valid pure density matrix: " + e.invariant());
        }
    }

    Trajectory traj;
    traj.plan = plan_steps(c, opts);
    const std::size_t samples = traj.plan.n_steps / traj.plan.stride + 2;
    traj.times.reserve(samples);
    traj.densities.reserve(samples);
    traj.populations.reserve(samples);

    detail::integrate<DensityMatrix, VonNeumannRhs<>>(c, traj.plan, rho0, [&](double t, const DensityMatrix& rho) {
        detail::check_density(rho, t, traj.drift, opts.check_invariants);
        traj.times.push_back(t);
        traj.densities.push_back(rho);
        traj.populations.push_back(detail::populations_of(rho));
    });
    return traj;
}

/// Integrate the Schroedinger equation from psi0 at t = 0 to t = tau.
inline Trajectory evolve_state(const SystemConfig& c, const StateVector& psi0,
                               const IntegratorOptions& opts = {}) {
    c.validate();
    if (std::abs(norm_sq(psi0) - 1.0) > 1e-9) throw InvalidParameter("psi0 must be normalized");

    Trajectory traj;
    traj.plan = plan_steps(c, opts);
    const std::size_t samples = traj.plan.n_steps / traj.plan.stride + 2;
    traj.times.reserve(samples);
    traj.states.reserve(samples);
    traj.populations.reserve(samples);

    detail::integrate<StateVector, SchroedingerRhs<>>(c, traj.plan, psi0, [&](double t, const StateVector& psi) {
        detail::check_state(psi, t, traj.drift, opts.check_invariants);
        traj.times.push_back(t);
        traj.states.push_back(psi);
        traj.populations.push_back(detail::populations_of(psi));
    });
    return traj;
}

/// |F(tau)|^2: right-dot population at the end of the trajectory.
inline double transfer_fidelity(const Trajectory& traj) {
    if (traj.populations.empty()) throw InvalidParameter("transfer_fidelity: empty trajectory");
    return traj.populations.back()[2];
}

/// tr(rho H)
inline double energy_expectation(const DensityMatrix& rho, const HermitianMatrix3& h) {
    return trace(rho * h.cast<complex>()).real();
}

}  // namespace adiapass
