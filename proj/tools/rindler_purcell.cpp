// rindler_purcell: spectra, single-point decay probabilities and acceleration
// sweeps for a detector in a uniformly accelerated cavity.
//
//   rindler_purcell modes --mass 1 --accel 1 --k-max 5
//   rindler_purcell point --figure 1 --accel 0.3 --verbose
//   rindler_purcell sweep --figure 3 --output fig3.csv
//   rindler_purcell sweep --config fig3.csv          (re-run an earlier CSV)
//
// Exit codes: 0 ok, 1 configuration, 2 numerical failure, 3 I/O.

#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "rindler_purcell/cli.hpp"
#include "rindler_purcell/sweep.hpp"

namespace {

using namespace rp;
using namespace rp::cli;

struct Flags {
    double length = 0, mass = 0, accel = 0, accel_min = 0, accel_max = 0, tau = 0, epsilon = 0;
    int accel_steps = 0, mode_n = 0, k_max = 0, figure = 0;
    std::string placement, output, config;
    bool verbose = false;
};

template <class T>
void override_if(const CLI::Option* opt, T& field, const T& value) {
    if (opt->count() > 0)
        field = value;
}

int run_sweep_command(const RunConfig& cfg) {
    const SweepPlan plan = sweep_plan(cfg);
    const auto start = std::chrono::steady_clock::now();
    const SweepResult result = run_sweep(plan);
    write_output(cfg.output, format_sweep_csv(cfg, result));

    for (const auto& f : result.failures)
        std::fprintf(stderr, "point %zu (a = %.12g) failed: %s\n", f.index, f.accel, f.message.c_str());
    if (cfg.verbose) {
        std::size_t loose = 0;
        for (auto c : result.converged)
            loose += c ? 0 : 1;
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::fprintf(stderr, "%zu points in %.2f s on %u threads; %zu with an unconverged tail\n",
                     plan.accelerations.size(), s, sweep_thread_count(), loose);
    }
    return result.failures.empty() ? kOk : kNumerical;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decay probability of a detector co-accelerating with a 1+1D cavity"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Flags f;
    auto* o_length = app.add_option("--length", f.length, "cavity proper length L");
    auto* o_mass = app.add_option("--mass", f.mass, "field mass m (0 for massless)");
    auto* o_accel = app.add_option("--accel", f.accel, "acceleration for modes/point (sets accel_max)");
    auto* o_amin = app.add_option("--accel-min", f.accel_min, "sweep grid lower bound (excluded)");
    auto* o_amax = app.add_option("--accel-max", f.accel_max, "sweep grid upper bound");
    auto* o_steps = app.add_option("--accel-steps", f.accel_steps, "number of sweep points");
    auto* o_mode = app.add_option("--mode-n", f.mode_n, "resonant resting mode n");
    auto* o_place = app.add_option("--placement", f.placement, "center or nodes")
                        ->check(CLI::IsMember({"center", "nodes"}));
    auto* o_tau = app.add_option("--tau", f.tau, "interaction proper time");
    auto* o_eps = app.add_option("--epsilon", f.epsilon, "coupling constant");
    auto* o_kmax = app.add_option("--k-max", f.k_max, "modes kept in the sums");
    auto* o_fig = app.add_option("--figure", f.figure, "figure preset 1..5")->check(CLI::Range(1, 5));
    auto* o_out = app.add_option("--output", f.output, "output path (default stdout)");
    auto* o_cfg = app.add_option("--config", f.config, "config file or earlier CSV output");
    app.add_flag("--verbose", f.verbose, "per-mode breakdown and timing on stderr");
    o_accel->excludes(o_amax);

    auto* modes = app.add_subcommand("modes", "inertial and accelerated spectra as CSV");
    auto* point = app.add_subcommand("point", "decay probability at one acceleration");
    auto* sweep = app.add_subcommand("sweep", "decay probability over an acceleration grid, as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        RunConfig cfg;
        if (o_fig->count() > 0)
            apply_figure(cfg, f.figure);
        if (o_cfg->count() > 0)
            load_config_file(f.config, cfg);
        override_if(o_length, cfg.length, f.length);
        override_if(o_mass, cfg.mass, f.mass);
        override_if(o_amin, cfg.accel_min, f.accel_min);
        override_if(o_amax, cfg.accel_max, f.accel_max);
        override_if(o_accel, cfg.accel_max, f.accel);
        override_if(o_steps, cfg.accel_steps, f.accel_steps);
        override_if(o_mode, cfg.mode_n, f.mode_n);
        if (o_place->count() > 0)
            cfg.placement = f.placement == "nodes" ? PlacementSet::all_nodes : PlacementSet::center;
        override_if(o_tau, cfg.tau, f.tau);
        override_if(o_eps, cfg.epsilon, f.epsilon);
        override_if(o_kmax, cfg.k_max, f.k_max);
        override_if(o_out, cfg.output, f.output);
        cfg.verbose = f.verbose;

        if (modes->parsed()) {
            write_output(cfg.output, format_modes_csv(cfg));
            return kOk;
        }
        if (point->parsed()) {
            const PointReport report = evaluate_point_report(cfg);
            write_output(cfg.output, report.text);
            if (cfg.verbose)
                std::fputs(report.breakdown.c_str(), stderr);
            return kOk;
        }
        if (sweep->parsed())
            return run_sweep_command(cfg);
        return kConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIo;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfig;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumerical;
    }
}
