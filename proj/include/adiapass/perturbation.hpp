#pragma once

// First-order perturbative ground state at the end of the transfer, where
// the right dot sits at -mu0 and the M-R bond j2 is the perturbation.

#include <cmath>

#include "adiapass/errors.hpp"
#include "adiapass/linalg.hpp"

namespace adiapass {

struct PerturbativeGroundState {
    Vector3<double> amplitudes;  ///< (a_L, a_M, a_R), unnormalized, a_R == 1
    double j1 = 0.0;
    double j2 = 0.0;
    double mu0 = 0.0;

    Vector3<double> normalized() const {
        Vector3<double> v = amplitudes;
        v *= 1.0 / norm(v);
        return v;
    }
};

namespace detail {

inline double resonance_denominator(double j1, double mu0) {
    const double d = mu0 * mu0 - j1 * j1;
    if (d == 0.0 || !(std::abs(d) >= 1e-9 * mu0 * mu0))
        throw ResonanceError("perturbative formula undefined at mu0^2 = j1^2 (mu0 = " +
                             std::to_string(mu0) + ", j1 = " + std::to_string(j1) + ")");
    return d;
}

}  // namespace detail

inline PerturbativeGroundState corrected_ground_state(double j1, double j2, double mu0) {
    if (!(mu0 > 0.0)) throw InvalidParameter("corrected_ground_state: mu0 must be > 0");
    const double d = detail::resonance_denominator(j1, mu0);
    return {Vector3<double>{{j1 * j2 / d, -mu0 * j2 / d, 1.0}}, j1, j2, mu0};
}

/// |F(tau)|^2 = [1 + j2^2 (mu0^2 + j1^2) / (mu0^2 - j1^2)^2]^-1
inline double analytic_fidelity(double j1, double j2, double mu0) {
    const double d = detail::resonance_denominator(j1, mu0);
    return 1.0 / (1.0 + j2 * j2 * (mu0 * mu0 + j1 * j1) / (d * d));
}

}  // namespace adiapass
