#pragma once

// Three-dot chain L - M - R with fixed tunneling couplings and Gaussian
// gate-voltage pulses on the end dots. Units: hbar = 1, energies in units
// of the M-R coupling, times in its inverse.

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "adiapass/errors.hpp"
#include "adiapass/linalg.hpp"

namespace adiapass {

/// Basis order {|L>, |M>, |R>}.
enum class Site : std::size_t { left = 0, middle = 1, right = 2 };

struct CouplingPair {
    double j1 = 0.8;  ///< L-M tunneling
    double j2 = 1.0;  ///< M-R tunneling

    void validate() const {
        if (!std::isfinite(j1)) throw InvalidParameter("j1 must be finite");
        if (!std::isfinite(j2)) throw InvalidParameter("j2 must be finite");
    }
};

/// Both end dots share the peak depth `mu0`; the left pulse is centred at
/// t = 0 and the right one at t = tau.
struct PulseSchedule {
    double mu0 = 20.0;
    double alpha = 5.0 / 400.0;
    double tau = 400.0;

    void validate() const {
        if (!std::isfinite(mu0) || mu0 < 0.0) throw InvalidParameter("mu0 must be >= 0");
        if (!std::isfinite(alpha) || alpha <= 0.0) throw InvalidParameter("alpha must be > 0");
        if (!std::isfinite(tau) || tau <= 0.0) throw InvalidParameter("tau must be > 0");
    }

    /// Pulse shape parameter alpha * tau; below 3 the tails overlap the window edges.
    double width_ratio() const noexcept { return alpha * tau; }

    static PulseSchedule with_alpha_over_tau(double mu0, double k, double tau) {
        return {mu0, k / tau, tau};
    }
};

/// Non-fatal diagnostic for a schedule whose pulses overlap significantly.
inline std::optional<std::string> overlap_warning(const PulseSchedule& s) {
    if (s.width_ratio() < 3.0)
        return "alpha*tau = " + std::to_string(s.width_ratio()) +
               " < 3: pulse tails are not negligible at the window edges";
    return std::nullopt;
}

struct SystemConfig {
    CouplingPair couplings;
    PulseSchedule schedule;

    void validate() const {
        couplings.validate();
        schedule.validate();
    }
};

using HermitianMatrix3 = Matrix3<double>;

inline double gate_voltage_left(const PulseSchedule& s, double t) {
    return -s.mu0 * std::exp(-0.5 * s.alpha * s.alpha * t * t);
}

inline double gate_voltage_right(const PulseSchedule& s, double t) {
    const double d = t - s.tau;
    return -s.mu0 * std::exp(-0.5 * s.alpha * s.alpha * d * d);
}

/// Analytic time derivatives (d mu_L/dt, d mu_R/dt).
inline std::pair<double, double> gate_voltage_rates(const PulseSchedule& s, double t) {
    const double a2 = s.alpha * s.alpha;
    const double d = t - s.tau;
    return {s.mu0 * a2 * t * std::exp(-0.5 * a2 * t * t),
            s.mu0 * a2 * d * std::exp(-0.5 * a2 * d * d)};
}

inline HermitianMatrix3 hamiltonian_from(const CouplingPair& j, double mu_left, double mu_right) {
    HermitianMatrix3 h;
    h(0, 0) = mu_left;
    h(0, 1) = j.j1;
    h(1, 0) = j.j1;
    h(1, 2) = j.j2;
    h(2, 1) = j.j2;
    h(2, 2) = mu_right;
    return h;
}

inline HermitianMatrix3 hamiltonian_at(const SystemConfig& c, double t) {
    return hamiltonian_from(c.couplings, gate_voltage_left(c.schedule, t),
                            gate_voltage_right(c.schedule, t));
}

/// dH/dt; only the two gated diagonal entries move.
inline HermitianMatrix3 hamiltonian_rate_at(const SystemConfig& c, double t) {
    const auto [dl, dr] = gate_voltage_rates(c.schedule, t);
    return HermitianMatrix3::diagonal(dl, 0.0, dr);
}

/// Upper bound on max |H_ij| entries summed, used to pick integrator steps.
inline double hamiltonian_scale(const SystemConfig& c) {
    return c.schedule.mu0 + std::abs(c.couplings.j1) + std::abs(c.couplings.j2);
}

}  // namespace adiapass
