#pragma once

// Run configuration, `key = value` config parsing and CSV formatting for the
// rindler_purcell command-line tool. Everything here returns strings; the
// tool owns the file system and exit codes.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "rindler_purcell/detector.hpp"
#include "rindler_purcell/inertial_cavity.hpp"
#include "rindler_purcell/rindler_cavity.hpp"
#include "rindler_purcell/sweep.hpp"

namespace rp::cli {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr std::string_view kBanner = "# rindler-purcell v";

/// Bad key, malformed value or a value that violates a model invariant.
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

enum ExitCode : int { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3 };

struct RunConfig {
    double length = 1.0;
    double mass = 1.0;
    double accel_min = 0.0;
    double accel_max = 1.8;
    int accel_steps = 400;
    int mode_n = 2;
    PlacementSet placement = PlacementSet::center;
    double tau = 50.0;
    double epsilon = 1.0;
    int k_max = 64;
    std::string output; // empty or "-" means standard output
    bool verbose = false;
};

inline void apply_figure(RunConfig& cfg, int figure) {
    const FigurePreset f = figure_preset(figure);
    cfg.length = f.length;
    cfg.mass = f.mass;
    cfg.accel_min = 0.0;
    cfg.accel_max = f.accel_max;
    cfg.accel_steps = f.accel_steps;
    cfg.mode_n = f.mode_n;
    cfg.placement = f.placements;
    cfg.tau = f.tau;
    cfg.epsilon = f.epsilon;
    cfg.k_max = f.k_max;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                          std::string(text) + "'");
    return value;
}

inline PlacementSet parse_placement(std::string_view text) {
    if (text == "center")
        return PlacementSet::center;
    if (text == "nodes")
        return PlacementSet::all_nodes;
    throw ConfigError("config key 'placement': expected center or nodes, got '" +
                      std::string(text) + "'");
}

// Shortest text that parses back to the same double.
inline std::string exact(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string sig12(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

/// Sets one key. Unknown keys are errors.
inline void set_key(RunConfig& cfg, std::string_view key, std::string_view value) {
    using detail::parse_number;
    if (key == "length")
        cfg.length = parse_number<double>(key, value);
    else if (key == "mass")
        cfg.mass = parse_number<double>(key, value);
    else if (key == "accel_min")
        cfg.accel_min = parse_number<double>(key, value);
    else if (key == "accel_max")
        cfg.accel_max = parse_number<double>(key, value);
    else if (key == "accel_steps")
        cfg.accel_steps = parse_number<int>(key, value);
    else if (key == "mode_n")
        cfg.mode_n = parse_number<int>(key, value);
    else if (key == "placement")
        cfg.placement = detail::parse_placement(value);
    else if (key == "tau")
        cfg.tau = parse_number<double>(key, value);
    else if (key == "epsilon")
        cfg.epsilon = parse_number<double>(key, value);
    else if (key == "k_max")
        cfg.k_max = parse_number<int>(key, value);
    else if (key == "output")
        cfg.output = std::string(value);
    else
        throw ConfigError("unknown config key '" + std::string(key) + "'");
}

/// Applies `key = value` entries separated by newlines or ';'. Text after
/// '#' on a line is a comment.
inline void parse_config_text(std::string_view text, RunConfig& cfg) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        line = line.substr(0, line.find('#'));
        while (!line.empty()) {
            const auto semi = line.find(';');
            const std::string_view entry = detail::trim(line.substr(0, semi));
            line = semi == std::string_view::npos ? std::string_view{} : line.substr(semi + 1);
            if (entry.empty())
                continue;
            const auto eq = entry.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
            const auto key = detail::trim(entry.substr(0, eq));
            const auto value = detail::trim(entry.substr(eq + 1));
            if (key.empty())
                throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
            set_key(cfg, key, value);
        }
    }
}

/// A config file, or a CSV written by this tool (its echoed second line is
/// the configuration).
inline void parse_config_document(std::string_view text, RunConfig& cfg) {
    if (text.substr(0, kBanner.size()) == kBanner) {
        const std::string doc(text);
        std::istringstream lines(doc);
        std::string banner, echo;
        std::getline(lines, banner);
        if (!std::getline(lines, echo) || echo.rfind("# ", 0) != 0)
            throw ConfigError("CSV input has no echoed configuration line");
        parse_config_text(std::string_view(echo).substr(2), cfg);
        return;
    }
    parse_config_text(text, cfg);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("error reading '" + path + "'");
    return buf.str();
}

inline void load_config_file(const std::string& path, RunConfig& cfg) {
    parse_config_document(read_file(path), cfg);
}

/// All physics keys on one line, `;`-separated, values exact. Output path
/// and verbosity are left out so the echo depends only on what was computed.
inline std::string echo_config(const RunConfig& cfg) {
    using detail::exact;
    std::string s;
    s += "length = " + exact(cfg.length);
    s += "; mass = " + exact(cfg.mass);
    s += "; accel_min = " + exact(cfg.accel_min);
    s += "; accel_max = " + exact(cfg.accel_max);
    s += "; accel_steps = " + std::to_string(cfg.accel_steps);
    s += "; mode_n = " + std::to_string(cfg.mode_n);
    s += std::string("; placement = ") +
         (cfg.placement == PlacementSet::center ? "center" : "nodes");
    s += "; tau = " + exact(cfg.tau);
    s += "; epsilon = " + exact(cfg.epsilon);
    s += "; k_max = " + std::to_string(cfg.k_max);
    return s;
}

inline std::string preamble(const RunConfig& cfg) {
    return std::string(kBanner) + std::string(kVersion) + "\n# " + echo_config(cfg) + "\n";
}

/// Checks the accelerations and builds the sweep plan; model invariants are
/// reported as ConfigError.
inline SweepPlan sweep_plan(const RunConfig& cfg) {
    try {
        if (!std::isfinite(cfg.accel_min) || cfg.accel_min < 0.0)
            throw ConfigError("accel_min must be >= 0");
        if (cfg.accel_steps < 1)
            throw ConfigError("accel_steps must be >= 1");
        if (!(cfg.accel_max > cfg.accel_min))
            throw ConfigError("accel_max must exceed accel_min");
        SweepPlan plan;
        plan.length = cfg.length;
        plan.mass = cfg.mass;
        plan.accelerations = uniform_grid(cfg.accel_min, cfg.accel_max, cfg.accel_steps);
        plan.mode_n = cfg.mode_n;
        plan.placements = cfg.placement;
        plan.tau = cfg.tau;
        plan.epsilon = cfg.epsilon;
        plan.k_max = cfg.k_max;
        plan.validate();
        return plan;
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

/// The same plan reduced to the single acceleration accel_max.
inline SweepPlan point_plan(const RunConfig& cfg) {
    SweepPlan plan = sweep_plan(cfg);
    plan.accelerations = {cfg.accel_max};
    return plan;
}

inline std::string format_sweep_csv(const RunConfig& cfg, const SweepResult& result) {
    std::string out = preamble(cfg);
    out += "a";
    for (const auto& c : result.curves)
        out += ",P_" + c.placement.label();
    out += "\n";
    const auto& grid = result.accelerations();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += detail::sig12(grid[i]);
        for (const auto& c : result.curves)
            out += "," + detail::sig12(c.probability[i]);
        out += "\n";
    }
    return out;
}

/// Inertial and accelerated spectra at a = accel_max, k = 1..k_max.
inline std::string format_modes_csv(const RunConfig& cfg) {
    const SweepPlan plan = point_plan(cfg);
    const RindlerGeometry geom(CavityGeometry(plan.length, plan.mass), plan.accelerations.front());
    const bool closed = geom.base().massless();
    const auto modes = closed ? massless_modes(geom, plan.k_max)
                              : solve_eigenfrequencies(geom, plan.k_max);
    std::string out = preamble(cfg);
    out += "k,omega_inertial,Omega,shift,method\n";
    for (const auto& m : modes) {
        const double w = mode_frequency(geom.base(), m.k);
        out += std::to_string(m.k) + "," + detail::sig12(w) + "," + detail::sig12(m.omega) + "," +
               detail::sig12((m.omega - w) / w) + "," + (closed ? "closed-form" : "root-solve") +
               "\n";
    }
    return out;
}

struct PointReport {
    std::string text;      // P, or `label,P` lines for several placements
    std::string breakdown; // per-mode terms
};

inline PointReport evaluate_point_report(const RunConfig& cfg) {
    const SweepPlan plan = point_plan(cfg);
    const RindlerGeometry geom(CavityGeometry(plan.length, plan.mass), plan.accelerations.front());
    SeriesControl control;
    control.k_max = plan.k_max;
    std::vector<RindlerMode> modes;
    if (!geom.base().massless())
        modes = solve_modes(geom, plan.k_max);

    const auto placements = plan.placement_list();
    PointReport report;
    for (const auto& placement : placements) {
        const DetectorConfig det =
            resonant_detector(geom.base(), plan.mode_n, placement, plan.tau, plan.epsilon);
        const DecayResult r = geom.base().massless()
                                  ? decay_probability_massless(geom, det, control)
                                  : decay_probability_accelerated(geom, modes, det, control);
        if (placements.size() == 1)
            report.text += detail::sig12(r.probability) + "\n";
        else
            report.text += placement.label() + "," + detail::sig12(r.probability) + "\n";
        report.breakdown += "# " + placement.label() + ": k_max = " + std::to_string(r.truncation_k) +
                            (r.converged ? ", converged\n" : ", not converged\n");
        report.breakdown += "k,Omega,term\n";
        for (const auto& t : r.terms)
            report.breakdown +=
                std::to_string(t.k) + "," + detail::sig12(t.omega) + "," + detail::sig12(t.term) + "\n";
    }
    return report;
}

/// Writes text to path, or to standard output for "" and "-".
inline void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out)
        throw IoError("error writing '" + path + "'");
}

} // namespace rp::cli
