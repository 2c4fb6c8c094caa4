#pragma once

// Instantaneous eigen-decomposition of H(t), gap tracking and the
// adiabaticity diagnostic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "adiapass/errors.hpp"
#include "adiapass/linalg.hpp"
#include "adiapass/model.hpp"

namespace adiapass {

/// Eigenpairs of a real symmetric 3x3 matrix, energies ascending.
struct EigenSystem {
    std::array<double, 3> energies{};
    std::array<Vector3<double>, 3> vectors{};
    double t = 0.0;

    double gap() const noexcept { return energies[1] - energies[0]; }
    const Vector3<double>& ground() const noexcept { return vectors[0]; }
};

namespace detail {

/// Make the largest-magnitude component positive (first one on ties).
inline void fix_sign(Vector3<double>& v) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0.0) v *= -1.0;
}

}  // namespace detail

inline EigenSystem eigensystem(const HermitianMatrix3& h, double t = 0.0) {
    SquareArray<3> a{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a[i][j] = h(i, j);
    const auto e = jacobi_eigen<3>(a, 1e-14, 100);

    EigenSystem out;
    out.t = t;
    for (std::size_t n = 0; n < 3; ++n) {
        out.energies[n] = e.values[n];
        out.vectors[n] = Vector3<double>{e.vectors[n]};
        detail::fix_sign(out.vectors[n]);
    }
    return out;
}

inline EigenSystem eigensystem_at(const SystemConfig& c, double t) {
    return eigensystem(hamiltonian_at(c, t), t);
}

/// Flip each vector of `next` that points away from its counterpart in `prev`.
inline void align_signs(const EigenSystem& prev, EigenSystem& next) {
    for (std::size_t n = 0; n < 3; ++n)
        if (dot(prev.vectors[n], next.vectors[n]) < 0.0) next.vectors[n] *= -1.0;
}

/// Eigensystems along a time grid with eigenvectors followed continuously.
/// The first point uses the static sign rule.
inline std::vector<EigenSystem> eigensystem_path(const SystemConfig& c, std::span<const double> grid) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] < 0.0 || grid[k] > c.schedule.tau)
            throw InvalidParameter("eigensystem_path: grid point outside [0, tau]");
        if (k > 0 && !(grid[k] > grid[k - 1]))
            throw InvalidParameter("eigensystem_path: grid must be strictly increasing");
    }
    std::vector<EigenSystem> path;
    path.reserve(grid.size());
    for (double t : grid) {
        auto es = eigensystem_at(c, t);
        if (!path.empty()) align_signs(path.back(), es);
        path.push_back(es);
    }
    return path;
}

/// n points evenly spaced on [t0, t1], endpoints included.
inline std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
    if (n < 2) throw InvalidParameter("uniform_grid: need at least 2 points");
    std::vector<double> g(n);
    const double h = (t1 - t0) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) g[k] = t0 + h * static_cast<double>(k);
    g.back() = t1;
    return g;
}

/// Delta(t) = eps1 - eps0.
inline double energy_gap(const SystemConfig& c, double t) {
    return eigensystem_at(c, t).gap();
}

/// <psi_m| dpsi_0/dt> from the Hellmann-Feynman identity
/// <psi_m|Hdot|psi_0> / (eps_0 - eps_m), in the gauge of `es`.
inline double nonadiabatic_coupling(const EigenSystem& es, const HermitianMatrix3& hdot, std::size_t m) {
    const double denom = es.energies[0] - es.energies[m];
    if (std::abs(denom) <= 1e-12)
        throw SingularGapError("nonadiabatic_coupling: degenerate levels at t = " + std::to_string(es.t));
    return dot(es.vectors[m], hdot * es.vectors[0]) / denom;
}

/// max_{m=1,2} |<psi_m|Hdot|psi_0>| / (eps_m - eps_0)^2. Adiabatic following
/// of the ground state holds where this is << 1.
inline double adiabaticity_metric(const SystemConfig& c, double t) {
    const auto es = eigensystem_at(c, t);
    if (es.gap() <= 1e-12)
        throw SingularGapError("adiabaticity_metric: gap " + std::to_string(es.gap()) +
                               " at t = " + std::to_string(t));
    const auto hdot = hamiltonian_rate_at(c, t);
    double worst = 0.0;
    for (std::size_t m = 1; m < 3; ++m) {
        const double de = es.energies[m] - es.energies[0];
        worst = std::max(worst, std::abs(dot(es.vectors[m], hdot * es.vectors[0])) / (de * de));
    }
    return worst;
}

struct GapMinimum {
    double t = 0.0;
    double gap = std::numeric_limits<double>::infinity();
};

inline GapMinimum min_gap(const SystemConfig& c, std::span<const double> grid) {
    GapMinimum best;
    for (double t : grid) {
        const double g = energy_gap(c, t);
        if (g < best.gap) best = {t, g};
    }
    return best;
}

/// Level-crossing check over a grid: throws when the smallest gap is not
/// positive, otherwise returns where it occurs.
inline GapMinimum require_no_level_crossing(const SystemConfig& c, std::span<const double> grid) {
    const auto m = min_gap(c, grid);
    if (!(m.gap > 1e-12))
        throw SingularGapError("level crossing: gap " + std::to_string(m.gap) +
                               " at t = " + std::to_string(m.t));
    return m;
}

inline double max_adiabaticity_metric(const SystemConfig& c, std::span<const double> grid) {
    double worst = 0.0;
    for (double t : grid) worst = std::max(worst, adiabaticity_metric(c, t));
    return worst;
}

}  // namespace adiapass
