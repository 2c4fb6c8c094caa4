#pragma once

// Parameter studies of the transfer protocol: gap profiles versus pulse
// width, population traces, and fidelity sweeps over tau, mu0 and j1/j2.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adiapass/dynamics.hpp"
#include "adiapass/errors.hpp"
#include "adiapass/model.hpp"
#include "adiapass/parallel.hpp"
#include "adiapass/perturbation.hpp"
#include "adiapass/spectral.hpp"

namespace adiapass {

enum class SweepParameter { alpha, tau, mu0, j1_over_j2 };

inline std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::alpha: return "alpha";
        case SweepParameter::tau: return "tau";
        case SweepParameter::mu0: return "mu0";
        case SweepParameter::j1_over_j2: return "j1_over_j2";
    }
    return "?";
}

inline std::optional<SweepParameter> sweep_parameter_from(std::string_view name) {
    for (auto p : {SweepParameter::alpha, SweepParameter::tau, SweepParameter::mu0, SweepParameter::j1_over_j2})
        if (to_string(p) == name) return p;
    return std::nullopt;
}

struct SweepSpec {
    SystemConfig base;
    SweepParameter parameter = SweepParameter::mu0;
    std::vector<double> values;
    IntegratorOptions integrator;
    /// Time samples used for the gap and adiabaticity diagnostics.
    std::size_t diagnostic_points = 2001;

    void validate() const {
        base.validate();
        if (values.empty()) throw InvalidParameter("sweep values must be nonempty");
        for (double v : values)
            if (!std::isfinite(v)) throw InvalidParameter("sweep values must be finite");
        bool up = true, down = true;
        for (std::size_t i = 1; i < values.size(); ++i) {
            up = up && values[i] > values[i - 1];
            down = down && values[i] < values[i - 1];
        }
        if (!up && !down) throw InvalidParameter("sweep values must be strictly monotone");
        if (diagnostic_points < 2) throw InvalidParameter("diagnostic_points must be >= 2");
    }
};

struct SweepRecord {
    double value = 0.0;
    double fidelity_sq = std::numeric_limits<double>::quiet_NaN();
    double min_gap = std::numeric_limits<double>::quiet_NaN();
    double max_adiabaticity_metric = std::numeric_limits<double>::quiet_NaN();
    double wall_time = 0.0;  ///< seconds; excluded from determinism comparisons
    InvariantDrift drift;
    std::optional<std::string> error;

    bool ok() const noexcept { return !error.has_value(); }
};

struct SweepResult {
    SweepParameter parameter = SweepParameter::mu0;
    std::vector<SweepRecord> records;
};

/// Configuration for one sweep point. Sweeping tau keeps alpha * tau fixed
/// at the base value so the pulse shape is unchanged in units of tau.
inline SystemConfig apply_sweep_value(const SystemConfig& base, SweepParameter p, double v) {
    SystemConfig c = base;
    switch (p) {
        case SweepParameter::alpha: c.schedule.alpha = v; break;
        case SweepParameter::tau:
            c.schedule.alpha = base.schedule.width_ratio() / v;
            c.schedule.tau = v;
            break;
        case SweepParameter::mu0: c.schedule.mu0 = v; break;
        case SweepParameter::j1_over_j2: c.couplings.j1 = v * base.couplings.j2; break;
    }
    return c;
}

/// Full diagnostics and a density-matrix run from |L><L| for one configuration.
/// Library errors are captured in the record rather than thrown.
inline SweepRecord run_point(const SystemConfig& c, const IntegratorOptions& opts, std::size_t diagnostic_points,
                             double value = 0.0) {
    const auto start = std::chrono::steady_clock::now();
    SweepRecord r;
    r.value = value;
    try {
        c.validate();
        const auto grid = uniform_grid(0.0, c.schedule.tau, diagnostic_points);
        r.min_gap = require_no_level_crossing(c, grid).gap;
        r.max_adiabaticity_metric = max_adiabaticity_metric(c, grid);
        const auto traj = evolve_density(c, site_density(Site::left), opts);
        r.fidelity_sq = transfer_fidelity(traj);
        r.drift = traj.drift;
    } catch (const Error& e) {
        r.error = e.what();
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline SweepResult run_sweep(const SweepSpec& spec, std::size_t workers = default_workers()) {
    spec.validate();
    SweepResult out;
    out.parameter = spec.parameter;
    out.records = parallel_map(spec.values.size(), workers, [&spec](std::size_t i) {
        const double v = spec.values[i];
        return run_point(apply_sweep_value(spec.base, spec.parameter, v), spec.integrator,
                         spec.diagnostic_points, v);
    });
    return out;
}

inline SweepResult sweep_tau(const SystemConfig& base, std::vector<double> taus, const IntegratorOptions& opts = {},
                             std::size_t workers = default_workers()) {
    return run_sweep({base, SweepParameter::tau, std::move(taus), opts}, workers);
}

inline SweepResult sweep_mu0(const SystemConfig& base, std::vector<double> mu0s, const IntegratorOptions& opts = {},
                             std::size_t workers = default_workers()) {
    return run_sweep({base, SweepParameter::mu0, std::move(mu0s), opts}, workers);
}

/// j2 stays at its base value; j1 = ratio * j2.
inline SweepResult sweep_ratio(const SystemConfig& base, std::vector<double> ratios,
                               const IntegratorOptions& opts = {}, std::size_t workers = default_workers()) {
    return run_sweep({base, SweepParameter::j1_over_j2, std::move(ratios), opts}, workers);
}

struct GapProfile {
    std::vector<double> times;
    std::vector<double> alphas;
    std::vector<std::vector<double>> gaps;  ///< gaps[a][k] = Delta(times[k]) for alphas[a]

    double min_gap(std::size_t a) const {
        double m = std::numeric_limits<double>::infinity();
        for (double g : gaps[a]) m = std::min(m, g);
        return m;
    }
};

/// Delta(t) on a uniform grid over [0, tau] for each pulse width alpha.
inline GapProfile gap_profile(const SystemConfig& base, const std::vector<double>& alphas, std::size_t n_grid) {
    if (n_grid < 100) throw InvalidParameter("gap_profile: n_grid must be >= 100");
    base.validate();
    GapProfile p;
    p.times = uniform_grid(0.0, base.schedule.tau, n_grid);
    p.alphas = alphas;
    for (double a : alphas) {
        SystemConfig c = base;
        c.schedule.alpha = a;
        c.validate();
        std::vector<double> g;
        g.reserve(n_grid);
        for (double t : p.times) g.push_back(energy_gap(c, t));
        p.gaps.push_back(std::move(g));
    }
    return p;
}

/// Site populations over [0, tau] starting from the electron on the left dot.
inline Trajectory population_trace(const SystemConfig& c, const IntegratorOptions& opts = {}) {
    return evolve_density(c, site_density(Site::left), opts);
}

struct ComparisonRow {
    double mu0 = 0.0;
    double j1 = 0.0;
    double j2 = 0.0;
    double numeric = std::numeric_limits<double>::quiet_NaN();
    double analytic = std::numeric_limits<double>::quiet_NaN();
    double abs_diff = std::numeric_limits<double>::quiet_NaN();
    std::optional<std::string> error;
};

struct Comparison {
    std::vector<ComparisonRow> rows;

    double max_abs_diff() const {
        double m = 0.0;
        for (const auto& r : rows)
            if (!r.error) m = std::max(m, r.abs_diff);
        return m;
    }
};

/// Numeric transfer fidelity against the perturbative formula. Every
/// configuration must lie in the formula's domain: mu0 >= 10 |j2| and
/// tau >= 4 mu0 / j1^2.
inline Comparison compare_analytic(const std::vector<SystemConfig>& grid, const IntegratorOptions& opts = {},
                                   std::size_t workers = default_workers()) {
    for (const auto& c : grid) {
        c.validate();
        const auto& j = c.couplings;
        const auto& s = c.schedule;
        if (s.mu0 < 10.0 * std::abs(j.j2))
            throw InvalidParameter("compare_analytic: requires mu0/|j2| >= 10");
        if (!(s.tau >= 4.0 * s.mu0 / (j.j1 * j.j1)))
            throw InvalidParameter("compare_analytic: requires tau >= 4 mu0 / j1^2");
    }
    Comparison out;
    out.rows = parallel_map(grid.size(), workers, [&](std::size_t i) {
        const auto& c = grid[i];
        ComparisonRow r;
        r.mu0 = c.schedule.mu0;
        r.j1 = c.couplings.j1;
        r.j2 = c.couplings.j2;
        try {
            r.analytic = analytic_fidelity(r.j1, r.j2, r.mu0);
            r.numeric = transfer_fidelity(evolve_density(c, site_density(Site::left), opts));
            r.abs_diff = std::abs(r.numeric - r.analytic);
        } catch (const Error& e) {
            r.error = e.what();
        }
        return r;
    });
    return out;
}

/// Reference parameter sets.
namespace presets {

/// mu0 = 20, j1 = 0.8, j2 = 1, tau = 400, alpha = k / tau.
inline SystemConfig gap_and_population(double k = 5.0) {
    return {{0.8, 1.0}, PulseSchedule::with_alpha_over_tau(20.0, k, 400.0)};
}

/// mu0 = 20, j1 = 0.8, j2 = 1, tau = 375, alpha = 5 / tau.
inline SystemConfig fidelity_maps() {
    return {{0.8, 1.0}, PulseSchedule::with_alpha_over_tau(20.0, 5.0, 375.0)};
}

/// tau in {0.2, ..., 10} * mu0 / j1^2.
inline std::vector<double> tau_grid(const SystemConfig& c) {
    const double unit = c.schedule.mu0 / (c.couplings.j1 * c.couplings.j1);
    std::vector<double> out;
    for (double m : {0.2, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0}) out.push_back(m * unit);
    return out;
}

/// mu0 in {2, 4, ..., 40}
inline std::vector<double> mu0_grid() {
    std::vector<double> out;
    for (int m = 2; m <= 40; m += 2) out.push_back(m);
    return out;
}

/// j1/j2 in {0.10, 0.15, ..., 1.50}
inline std::vector<double> ratio_grid() {
    std::vector<double> out;
    for (int r = 10; r <= 150; r += 5) out.push_back(r / 100.0);
    return out;
}

inline std::vector<double> gap_alphas(const SystemConfig& c) {
    return {3.0 / c.schedule.tau, 4.0 / c.schedule.tau, 5.0 / c.schedule.tau, 6.0 / c.schedule.tau};
}

}  // namespace presets

}  // namespace adiapass
