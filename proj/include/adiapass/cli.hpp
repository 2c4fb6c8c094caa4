#pragma once

// Configuration documents, CSV output and subcommand dispatch for the
// `adiapass` command-line tool.
//
// A configuration is a flat list of `key = value` lines; `#` starts a
// comment. Values are numeric literals, comma-separated lists of them, or
// `auto` where noted. Every output begins with `#`-prefixed metadata whose
// `# key = value` lines form a configuration reproducing that output.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "adiapass/errors.hpp"
#include "adiapass/experiments.hpp"

#ifndef ADIAPASS_VERSION
#define ADIAPASS_VERSION "0.1.0"
#endif

namespace adiapass::cli {

inline constexpr std::string_view version = ADIAPASS_VERSION;

/// Resolved settings for one invocation. Defaults reproduce the
/// mu0 = 20, j1 = 0.8, j2 = 1, tau = 400, alpha = 5/tau baseline.
struct ExperimentConfig {
    double j1 = 0.8;
    double j2 = 1.0;
    double mu0 = 20.0;
    double tau = 400.0;
    std::optional<double> alpha;              ///< absolute pulse width
    std::optional<double> alpha_over_tau = 5.0;  ///< alpha = k / tau; exclusive with `alpha`
    std::optional<double> step;               ///< nullopt = auto
    std::optional<std::size_t> sample_stride;  ///< nullopt = auto
    std::vector<double> gap_alphas_over_tau{3.0, 4.0, 5.0, 6.0};
    std::size_t gap_points = 2001;
    std::size_t diagnostic_points = 2001;
    std::optional<std::vector<double>> sweep_values;  ///< nullopt = per-subcommand default grid
    std::vector<double> compare_mu0 = [] {
        std::vector<double> v;
        for (int m = 14; m <= 40; m += 2) v.push_back(m);
        return v;
    }();

    double resolved_alpha() const { return alpha ? *alpha : *alpha_over_tau / tau; }

    SystemConfig system() const { return {{j1, j2}, {mu0, resolved_alpha(), tau}}; }

    IntegratorOptions integrator() const {
        IntegratorOptions o;
        o.step = step;
        o.sample_stride = sample_stride;
        return o;
    }

    /// Physical invariants; throws InvalidParameter.
    void validate() const {
        system().validate();
        if (gap_points < 100) throw InvalidParameter("gap_points must be >= 100");
        if (diagnostic_points < 2) throw InvalidParameter("diagnostic_points must be >= 2");
        if (step && (!(*step > 0.0) || *step > tau)) throw InvalidParameter("step must be in (0, tau]");
        if (sample_stride && *sample_stride == 0) throw InvalidParameter("sample_stride must be >= 1");
    }

    /// Non-fatal diagnostics.
    std::vector<std::string> warnings() const {
        std::vector<std::string> w;
        if (auto msg = overlap_warning(system().schedule)) w.push_back(*msg);
        return w;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view text, std::string_view key, int line) {
    text = trim(text);
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc{} || ptr != last)
        throw ConfigError(std::string(key) + ": expected a numeric literal, got '" + std::string(text) + "'", line);
    return v;
}

inline std::size_t parse_count(std::string_view text, std::string_view key, int line) {
    const double v = parse_number(text, key, line);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15)
        throw ConfigError(std::string(key) + ": expected a non-negative integer", line);
    return static_cast<std::size_t>(v);
}

inline std::vector<double> parse_list(std::string_view text, std::string_view key, int line) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_number(text.substr(0, comma), key, line));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

inline bool is_auto(std::string_view v) { return trim(v) == "auto"; }

/// Shortest text that parses back to exactly `v`.
inline std::string format_exact(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_exact(v[i]);
    }
    return s;
}

}  // namespace detail

/// Set one key. Assigning `alpha` clears `alpha_over_tau` and vice versa.
inline void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value, int line = 0) {
    using namespace detail;
    key = trim(key);
    if (key == "j1") c.j1 = parse_number(value, key, line);
    else if (key == "j2") c.j2 = parse_number(value, key, line);
    else if (key == "mu0") c.mu0 = parse_number(value, key, line);
    else if (key == "tau") c.tau = parse_number(value, key, line);
    else if (key == "alpha") {
        c.alpha = parse_number(value, key, line);
        c.alpha_over_tau.reset();
    } else if (key == "alpha_over_tau") {
        c.alpha_over_tau = parse_number(value, key, line);
        c.alpha.reset();
    } else if (key == "step") {
        if (is_auto(value)) c.step.reset();
        else c.step = parse_number(value, key, line);
    } else if (key == "sample_stride") {
        if (is_auto(value)) c.sample_stride.reset();
        else c.sample_stride = parse_count(value, key, line);
    } else if (key == "gap_alphas_over_tau") c.gap_alphas_over_tau = parse_list(value, key, line);
    else if (key == "gap_points") c.gap_points = parse_count(value, key, line);
    else if (key == "diagnostic_points") c.diagnostic_points = parse_count(value, key, line);
    else if (key == "sweep_values") {
        if (is_auto(value)) c.sweep_values.reset();
        else c.sweep_values = parse_list(value, key, line);
    } else if (key == "compare_mu0") c.compare_mu0 = parse_list(value, key, line);
    else throw ConfigError("unknown key '" + std::string(key) + "'", line);
}

/// Apply a `key = value` document on top of `base`. Keys may appear once;
/// `alpha` and `alpha_over_tau` are mutually exclusive within a document.
inline ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {}) {
    std::set<std::string, std::less<>> seen;
    std::istringstream in{std::string(text)};
    int line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
        const auto key = detail::trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        if (!seen.insert(std::string(key)).second)
            throw ConfigError("duplicate key '" + std::string(key) + "'", line_no);
        if ((key == "alpha" && seen.contains("alpha_over_tau")) ||
            (key == "alpha_over_tau" && seen.contains("alpha")))
            throw ConfigError("'alpha' and 'alpha_over_tau' are mutually exclusive", line_no);
        apply_setting(base, key, line.substr(eq + 1), line_no);
    }
    base.validate();
    return base;
}

/// Apply `key=value` overrides (the `--set` arguments) in order.
inline void apply_overrides(ExperimentConfig& c, const std::vector<std::string>& sets) {
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        apply_setting(c, std::string_view(s).substr(0, eq), std::string_view(s).substr(eq + 1));
    }
    c.validate();
}

/// The `# key = value` lines of an output header, with the `# ` removed,
/// as a configuration document.
inline std::string config_from_output(std::string_view output) {
    std::string doc;
    std::istringstream in{std::string(output)};
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("# ", 0) != 0) {
            if (!line.empty() && line[0] != '#') break;
            continue;
        }
        const auto body = line.substr(2);
        const auto eq = body.find('=');
        const auto colon = body.find(':');
        if (eq == std::string::npos || (colon != std::string::npos && colon < eq)) continue;
        doc += body;
        doc += '\n';
    }
    return doc;
}

/// Header comment lines: metadata (`# name: value`) and the resolved
/// settings (`# key = value`).
inline std::vector<std::string> settings_lines(const ExperimentConfig& c) {
    using detail::format_exact;
    std::vector<std::string> l;
    l.push_back("j1 = " + format_exact(c.j1));
    l.push_back("j2 = " + format_exact(c.j2));
    l.push_back("mu0 = " + format_exact(c.mu0));
    l.push_back("tau = " + format_exact(c.tau));
    if (c.alpha) l.push_back("alpha = " + format_exact(*c.alpha));
    else l.push_back("alpha_over_tau = " + format_exact(*c.alpha_over_tau));
    l.push_back("step = " + (c.step ? format_exact(*c.step) : std::string("auto")));
    l.push_back("sample_stride = " + (c.sample_stride ? std::to_string(*c.sample_stride) : std::string("auto")));
    l.push_back("gap_alphas_over_tau = " + detail::format_list(c.gap_alphas_over_tau));
    l.push_back("gap_points = " + std::to_string(c.gap_points));
    l.push_back("diagnostic_points = " + std::to_string(c.diagnostic_points));
    l.push_back("sweep_values = " + (c.sweep_values ? detail::format_list(*c.sweep_values) : std::string("auto")));
    l.push_back("compare_mu0 = " + detail::format_list(c.compare_mu0));
    return l;
}

/// Rectangular numeric table written row by row; 12 significant digits.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> columns) : out_(out), width_(columns.size()) {
        for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
        out_ << '\n';
    }

    void row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

    void row(const std::vector<double>& values) {
        if (values.size() != width_) throw Error("CsvWriter: row width does not match header");
        for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format(values[i]);
        out_ << '\n';
    }

    static std::string format(double v) {
        if (std::isnan(v)) return "nan";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return buf;
    }

private:
    std::ostream& out_;
    std::size_t width_;
};

inline const std::vector<std::string_view>& subcommands() {
    static const std::vector<std::string_view> names{"evolve",    "gap",       "analytic",   "sweep-tau",
                                                     "sweep-mu0", "sweep-ratio", "compare"};
    return names;
}

inline std::string usage() {
    std::string s = "usage: adiapass <subcommand> [--config FILE] [--out FILE] [--set key=value ...]\n"
                    "subcommands:";
    for (auto n : subcommands()) {
        s += ' ';
        s += n;
    }
    return s + "\n";
}

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_integration = 2 };

namespace detail {

inline void write_header(std::ostream& out, std::string_view name, const ExperimentConfig& c) {
    const auto sys = c.system();
    const auto plan = plan_steps(sys, c.integrator());
    out << "# adiapass: " << version << '\n';
    out << "# subcommand: " << name << '\n';
    out << "# resolved_alpha: " << format_exact(sys.schedule.alpha) << '\n';
    out << "# resolved_step: " << format_exact(plan.step) << " (" << plan.n_steps << " RK4 steps, stride "
        << plan.stride << ")\n";
    for (const auto& l : settings_lines(c)) out << "# " << l << '\n';
}

inline int write_sweep(std::ostream& out, std::ostream& diag, const SweepResult& r) {
    CsvWriter csv(out, {"swept_value", "fidelity_sq", "min_gap", "max_adiab_metric"});
    int status = exit_ok;
    for (const auto& rec : r.records) {
        csv.row({rec.value, rec.fidelity_sq, rec.min_gap, rec.max_adiabaticity_metric});
        if (rec.error) {
            diag << "error at " << to_string(r.parameter) << " = " << rec.value << ": " << *rec.error << '\n';
            status = exit_integration;
        }
    }
    return status;
}

}  // namespace detail

/// Run one subcommand, writing CSV to `out` and messages to `diag`.
/// Returns 0 on success, 1 on validation errors, 2 when integration
/// accuracy was lost.
inline int run_subcommand(std::string_view name, const ExperimentConfig& config, std::ostream& out,
                          std::ostream& diag, std::size_t workers = default_workers()) {
    bool known = false;
    for (auto n : subcommands()) known = known || n == name;
    if (!known) {
        diag << "unknown subcommand '" << name << "'\n" << usage();
        return exit_validation;
    }

    try {
        config.validate();
        for (const auto& w : config.warnings()) diag << "warning: " << w << '\n';

        const auto sys = config.system();
        const auto opts = config.integrator();

        if (name == "analytic") {
            const double f = analytic_fidelity(config.j1, config.j2, config.mu0);
            detail::write_header(out, name, config);
            CsvWriter csv(out, {"mu0", "j1", "j2", "fidelity_sq"});
            csv.row({config.mu0, config.j1, config.j2, f});
            return exit_ok;
        }

        if (name == "evolve") {
            const auto traj = population_trace(sys, opts);
            detail::write_header(out, name, config);
            CsvWriter csv(out, {"t", "pop_L", "pop_M", "pop_R"});
            for (std::size_t k = 0; k < traj.times.size(); ++k) {
                const auto& p = traj.populations[k];
                csv.row({traj.times[k], p[0], p[1], p[2]});
            }
            return exit_ok;
        }

        if (name == "gap") {
            std::vector<double> alphas;
            for (double k : config.gap_alphas_over_tau) alphas.push_back(k / config.tau);
            const auto prof = gap_profile(sys, alphas, config.gap_points);
            detail::write_header(out, name, config);
            std::vector<std::string> cols{"t"};
            for (std::size_t a = 0; a < alphas.size(); ++a) {
                cols.push_back("gap_alpha" + std::to_string(a + 1));
                out << "# gap_alpha" << (a + 1) << ": alpha = " << detail::format_exact(alphas[a])
                    << ", min_gap = " << CsvWriter::format(prof.min_gap(a)) << '\n';
            }
            CsvWriter csv(out, cols);
            std::vector<double> row(cols.size());
            for (std::size_t k = 0; k < prof.times.size(); ++k) {
                row[0] = prof.times[k];
                for (std::size_t a = 0; a < alphas.size(); ++a) row[a + 1] = prof.gaps[a][k];
                csv.row(row);
            }
            return exit_ok;
        }

        if (name == "compare") {
            std::vector<SystemConfig> grid;
            for (double m : config.compare_mu0) {
                auto c = sys;
                c.schedule.mu0 = m;
                grid.push_back(c);
            }
            const auto cmp = compare_analytic(grid, opts, workers);
            detail::write_header(out, name, config);
            CsvWriter csv(out, {"mu0", "j1", "j2", "numeric", "analytic", "abs_diff"});
            int status = exit_ok;
            for (const auto& r : cmp.rows) {
                csv.row({r.mu0, r.j1, r.j2, r.numeric, r.analytic, r.abs_diff});
                if (r.error) {
                    diag << "error at mu0 = " << r.mu0 << ": " << *r.error << '\n';
                    status = exit_integration;
                }
            }
            out << "# max_abs_diff: " << CsvWriter::format(cmp.max_abs_diff()) << '\n';
            return status;
        }

        SweepSpec spec;
        spec.base = sys;
        spec.integrator = opts;
        spec.diagnostic_points = config.diagnostic_points;
        if (name == "sweep-tau") {
            spec.parameter = SweepParameter::tau;
            spec.values = config.sweep_values.value_or(presets::tau_grid(sys));
        } else if (name == "sweep-mu0") {
            spec.parameter = SweepParameter::mu0;
            spec.values = config.sweep_values.value_or(presets::mu0_grid());
        } else {
            spec.parameter = SweepParameter::j1_over_j2;
            spec.values = config.sweep_values.value_or(presets::ratio_grid());
        }
        const auto result = run_sweep(spec, workers);
        detail::write_header(out, name, config);
        out << "# swept_parameter: " << to_string(spec.parameter) << '\n';
        return detail::write_sweep(out, diag, result);
    } catch (const IntegrationAccuracyError& e) {
        diag << "error: " << e.what() << '\n';
        return exit_integration;
    } catch (const Error& e) {
        diag << "error: " << e.what() << '\n';
        return exit_validation;
    }
}

}  // namespace adiapass::cli
