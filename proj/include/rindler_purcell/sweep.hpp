#pragma once

// Acceleration sweeps over a grid, per-placement curves, and the shape
// queries used on them (local maxima, node ranking).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rindler_purcell/detector.hpp"
#include "rindler_purcell/inertial_cavity.hpp"
#include "rindler_purcell/rindler_cavity.hpp"

namespace rp {

enum class PlacementSet { center, all_nodes };

struct SweepPlan {
    double length = 1.0;
    double mass = 1.0;
    std::vector<double> accelerations;
    int mode_n = 2;
    PlacementSet placements = PlacementSet::center;
    double tau = 50.0;
    double epsilon = 1.0;
    int k_max = 64;

    /// Center, or nodes 1..n-1 of mode n from the rear mirror forward.
    [[nodiscard]] std::vector<Placement> placement_list() const {
        if (placements == PlacementSet::center)
            return {Placement::center()};
        std::vector<Placement> out;
        for (int j = 1; j < mode_n; ++j)
            out.push_back(Placement::node(mode_n, j));
        return out;
    }

    void validate() const {
        const CavityGeometry base(length, mass);
        if (accelerations.empty())
            throw DomainError("sweep grid is empty");
        for (std::size_t i = 0; i < accelerations.size(); ++i) {
            if (!std::isfinite(accelerations[i]) || accelerations[i] <= 0.0)
                throw DomainError("sweep accelerations must be > 0");
            if (i > 0 && !(accelerations[i] > accelerations[i - 1]))
                throw DomainError("sweep grid must be strictly increasing");
        }
        RindlerGeometry(base, accelerations.back());
        if (mode_n < 1)
            throw DomainError("mode_n must be >= 1");
        if (placements == PlacementSet::all_nodes && mode_n < 2)
            throw DomainError("node placements need mode_n >= 2");
        if (k_max < mode_n)
            throw DomainError("k_max must be >= mode_n");
        DetectorConfig det;
        det.omega = mode_frequency(base, mode_n);
        det.epsilon = epsilon;
        det.tau = tau;
        det.validate();
    }
};

/// steps points a_i = lo + (hi - lo) i / steps, i = 1..steps: the grid (lo, hi].
inline std::vector<double> uniform_grid(double lo, double hi, int steps) {
    if (steps < 1)
        throw DomainError("grid needs at least one step");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
        throw DomainError("grid bounds must satisfy lo < hi");
    std::vector<double> grid(steps);
    for (int i = 1; i <= steps; ++i)
        grid[i - 1] = lo + (hi - lo) * i / steps;
    grid.back() = hi;
    return grid;
}

struct SweepCurve {
    Placement placement;
    std::vector<double> probability; // NaN where the point is invalid
};

struct SweepFailure {
    std::size_t index = 0;
    double accel = 0.0;
    std::string message;
};

struct SweepResult {
    SweepPlan plan;
    std::vector<SweepCurve> curves;
    std::vector<std::uint8_t> valid;     // per grid point
    std::vector<std::uint8_t> converged; // per grid point, all placements
    std::vector<SweepFailure> failures;  // ascending index

    [[nodiscard]] const std::vector<double>& accelerations() const { return plan.accelerations; }
    [[nodiscard]] bool all_valid() const { return failures.empty(); }
};

/// Hardware concurrency, capped by RP_THREADS when that is a positive integer.
inline unsigned sweep_thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RP_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0)
            n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

namespace detail {

struct PointOutcome {
    std::vector<double> probability;
    bool converged = true;
};

inline PointOutcome evaluate_point(const SweepPlan& plan, const std::vector<Placement>& placements,
                                   double accel) {
    const RindlerGeometry geom(CavityGeometry(plan.length, plan.mass), accel);
    SeriesControl control;
    control.k_max = plan.k_max;

    std::vector<RindlerMode> modes;
    if (!geom.base().massless())
        modes = solve_modes(geom, plan.k_max);

    PointOutcome out;
    for (const auto& placement : placements) {
        const DetectorConfig det =
            resonant_detector(geom.base(), plan.mode_n, placement, plan.tau, plan.epsilon);
        const DecayResult r = geom.base().massless()
                                  ? decay_probability_massless(geom, det, control)
                                  : decay_probability_accelerated(geom, modes, det, control);
        if (!std::isfinite(r.probability) || r.probability < 0.0)
            throw NumericalFailure("non-finite decay probability");
        out.probability.push_back(r.probability);
        out.converged = out.converged && r.converged;
    }
    return out;
}

} // namespace detail

/// Evaluates every grid point, in parallel across up to `threads` workers
/// (0 means sweep_thread_count()). Points are independent, so the result does
/// not depend on the thread count. A point that throws is recorded in
/// failures and holds NaN.
inline SweepResult run_sweep(const SweepPlan& plan, unsigned threads = 0) {
    plan.validate();
    const auto placements = plan.placement_list();
    const std::size_t n = plan.accelerations.size();

    SweepResult result;
    result.plan = plan;
    for (const auto& p : placements)
        result.curves.push_back({p, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN())});
    result.valid.assign(n, 0);
    result.converged.assign(n, 0);
    std::vector<std::string> errors(n);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                const auto point = detail::evaluate_point(plan, placements, plan.accelerations[i]);
                for (std::size_t c = 0; c < placements.size(); ++c)
                    result.curves[c].probability[i] = point.probability[c];
                result.valid[i] = 1;
                result.converged[i] = point.converged ? 1 : 0;
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        }
    };

    if (threads == 0)
        threads = sweep_thread_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < n; ++i)
        if (!result.valid[i])
            result.failures.push_back({i, plan.accelerations[i], errors[i]});
    return result;
}

/// Strict interior local maxima of one curve by three-point comparison over
/// the valid points only. A flat top counts once, at its leftmost point.
inline std::vector<std::pair<double, double>> local_maxima(const SweepResult& result,
                                                           std::size_t curve) {
    if (curve >= result.curves.size())
        throw DomainError("local_maxima: no such curve");
    const auto& a = result.accelerations();
    const auto& p = result.curves[curve].probability;

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (result.valid[i])
            idx.push_back(i);

    std::vector<std::pair<double, double>> out;
    if (idx.size() < 3)
        return out;
    for (std::size_t i = 1; i + 1 < idx.size(); ++i) {
        const double here = p[idx[i]];
        if (!(p[idx[i - 1]] < here))
            continue;
        std::size_t j = i;
        while (j + 1 < idx.size() && p[idx[j + 1]] == here)
            ++j;
        if (j + 1 < idx.size() && p[idx[j + 1]] < here)
            out.emplace_back(a[idx[i]], here);
        i = j;
    }
    return out;
}

/// Largest valid value of a curve, NaN if none.
inline double curve_peak(const SweepResult& result, std::size_t curve) {
    double peak = std::numeric_limits<double>::quiet_NaN();
    const auto& p = result.curves.at(curve).probability;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (result.valid[i] && !(p[i] <= peak))
            peak = p[i];
    return peak;
}

/// Placements in descending order of their curve peak; ties keep node order.
inline std::vector<Placement> node_ranking(const SweepResult& result) {
    std::vector<std::pair<double, std::size_t>> peaks;
    for (std::size_t c = 0; c < result.curves.size(); ++c) {
        const double peak = curve_peak(result, c);
        peaks.emplace_back(std::isnan(peak) ? -std::numeric_limits<double>::infinity() : peak, c);
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    std::vector<Placement> out;
    for (const auto& [peak, c] : peaks)
        out.push_back(result.curves[c].placement);
    return out;
}

inline constexpr int kFigureCount = 5;

/// Sweep grid bounds and steps for a figure preset; used by figure_plan and
/// by the command-line presets.
struct FigurePreset {
    double length = 1.0;
    double mass = 1.0;
    double accel_max = 1.8;
    int accel_steps = 400;
    int mode_n = 2;
    PlacementSet placements = PlacementSet::center;
    double tau = 50.0;
    double epsilon = 1.0;
    int k_max = 64;
};

/// Presets reproducing figures 1 to 5:
///   1     m = 1,   n = 2, centre,     a in (0, 1.8]
///   2..4  m = 10,  n = 3, 4, 5, nodes, a in (0, 0.3]
///   5     m = 0,   n = 2, centre,     a in (0, 0.25]
/// All with L = 1, tau = 50, epsilon = 1, 400 points, k_max = 64.
inline FigurePreset figure_preset(int figure) {
    FigurePreset f;
    switch (figure) {
    case 1:
        break;
    case 2:
    case 3:
    case 4:
        f.mass = 10.0;
        f.accel_max = 0.3;
        f.mode_n = figure + 1;
        f.placements = PlacementSet::all_nodes;
        break;
    case 5:
        f.mass = 0.0;
        f.accel_max = 0.25;
        break;
    default:
        throw DomainError("figure must be 1.." + std::to_string(kFigureCount) + ", got " +
                          std::to_string(figure));
    }
    return f;
}

inline SweepPlan figure_plan(int figure) {
    const FigurePreset f = figure_preset(figure);
    SweepPlan plan;
    plan.length = f.length;
    plan.mass = f.mass;
    plan.accelerations = uniform_grid(0.0, f.accel_max, f.accel_steps);
    plan.mode_n = f.mode_n;
    plan.placements = f.placements;
    plan.tau = f.tau;
    plan.epsilon = f.epsilon;
    plan.k_max = f.k_max;
    return plan;
}

} // namespace rp
