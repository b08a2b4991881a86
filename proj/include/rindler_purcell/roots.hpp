#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "rindler_purcell/errors.hpp"

namespace rp {

/// Brent's method on a bracket [lo, hi] with f(lo), f(hi) of opposite sign.
/// Stops when the bracket is narrower than rel_tol·|root| (plus a tiny
/// absolute floor) or f hits zero exactly.
template <class F>
double brent_root(F&& f, double lo, double hi, double f_lo, double f_hi, double rel_tol = 1e-12,
                  int max_iter = 200) {
    if (f_lo == 0.0)
        return lo;
    if (f_hi == 0.0)
        return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw BracketingFailure("brent_root: endpoints do not bracket a root", lo, hi);

    double a = lo, b = hi, c = hi;
    double fa = f_lo, fb = f_hi, fc = f_hi;
    double d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                           0.5 * rel_tol * std::abs(b);
        const double half = 0.5 * (c - b);
        if (std::abs(half) <= tol || fb == 0.0)
            return b;

        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic interpolation, or secant when only two points
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc, r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * half * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : std::copysign(tol, half);
        fb = f(b);
    }
    throw NumericalFailure("brent_root: no convergence after " + std::to_string(max_iter) +
                           " iterations");
}

} // namespace rp
