#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rindler_purcell/errors.hpp"

namespace rp {

struct SimpsonOptions {
    double abs_tol = 1e-11;
    double rel_tol = 1e-10;
    int max_intervals = 10000;
};

/// Adaptive Simpson quadrature on [a, b].
///
/// Work-list driven rather than recursive: each accepted panel consumes its
/// share of the tolerance, proportional to its width. Throws NumericalFailure
/// when more than `max_intervals` subdivisions would be needed.
template <class F>
double adaptive_simpson(F&& f, double a, double b, const SimpsonOptions& opt = {}) {
    struct Panel {
        double lo, hi, f_lo, f_mid, f_hi, whole;
    };
    auto simpson = [](double lo, double hi, double flo, double fmid, double fhi) {
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    };
    if (a == b)
        return 0.0;

    const double width = b - a;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double coarse = simpson(a, b, fa, fm, fb);

    // A coarse estimate seeds the relative part of the tolerance; it is
    // refreshed as the accepted sum builds up.
    double scale = std::abs(coarse);
    std::vector<Panel> pending{{a, b, fa, fm, fb, coarse}};
    double total = 0.0;
    double total_abs = 0.0;
    int subdivisions = 0;

    while (!pending.empty()) {
        Panel p = pending.back();
        pending.pop_back();
        const double mid = 0.5 * (p.lo + p.hi);
        const double f_left = f(0.5 * (p.lo + mid));
        const double f_right = f(0.5 * (mid + p.hi));
        const double left = simpson(p.lo, mid, p.f_lo, f_left, p.f_mid);
        const double right = simpson(mid, p.hi, p.f_mid, f_right, p.f_hi);
        const double diff = left + right - p.whole;

        const double share = (p.hi - p.lo) / std::abs(width);
        const double tol = std::max(opt.abs_tol, opt.rel_tol * std::max(scale, total_abs)) * share;
        // Depth guard: at least two levels so a lucky coarse panel is not accepted.
        if ((std::abs(diff) <= 15.0 * tol && share < 0.3) || p.hi - p.lo < 1e-15 * std::abs(width)) {
            const double accepted = left + right + diff / 15.0;
            total += accepted;
            total_abs += std::abs(accepted);
            continue;
        }
        if (++subdivisions > opt.max_intervals)
            throw NumericalFailure("adaptive_simpson: exceeded " +
                                   std::to_string(opt.max_intervals) + " subdivisions");
        pending.push_back({mid, p.hi, p.f_mid, f_right, p.f_hi, right});
        pending.push_back({p.lo, mid, p.f_lo, f_left, p.f_mid, left});
    }
    return total;
}

} // namespace rp
