#pragma once

// Field modes of a cavity in uniform proper acceleration.
//
// Coordinates: χ is the Rindler radial coordinate, the reference trajectory
// (cavity centre) sits at χ = 1/a, the mirrors at χ₁,₂ = 1/a ∓ L/2. The
// tortoise coordinate ξ = ln(aχ)/a turns the mode equation into
//
//     Z''(ξ) + (Ω² - m² e^{2aξ}) Z = 0,     Z(ξ₁) = Z(ξ₂) = 0,
//
// a Sturm–Liouville problem on an interval of length L' = ξ₂ - ξ₁. Its
// solution vanishing at χ₂ is the Bessel cross product S(Ω/a, mχ, mχ₂).
//
// The unnormalised massive profile used throughout is
//
//     p(χ; Ω) = |Γ(1+iν)|² S(ν, mχ, mχ₂) = Ω Z(ξ),   Z(ξ₂) = 0, Z'(ξ₂) = 1,
//
// with ν = Ω/a. It is evaluated by the Bessel series where that series is
// well-conditioned and by integrating the ODE above otherwise; both give the
// same function. Modes are F = N p with N fixed by the Klein-Gordon norm
// 2Ω ∫ F² dξ = 2(Ω/a) ∫ F² dχ/χ = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "rindler_purcell/cavity.hpp"
#include "rindler_purcell/errors.hpp"
#include "rindler_purcell/inertial_cavity.hpp"
#include "rindler_purcell/quadrature.hpp"
#include "rindler_purcell/roots.hpp"
#include "rindler_purcell/specfun.hpp"

namespace rp {

class RindlerGeometry {
public:
    RindlerGeometry(CavityGeometry base, double accel) : base_(base), accel_(accel) {
        if (!std::isfinite(accel) || accel <= 0.0)
            throw DomainError("proper acceleration must be > 0, got " + std::to_string(accel));
        if (!(accel * base.length() < 2.0))
            throw DomainError("a*L must be < 2 (rear mirror behind the horizon): a*L = " +
                              std::to_string(accel * base.length()));
        const double half = 0.5 * base.length();
        xi1_ = std::log1p(-accel * half) / accel;
        xi2_ = std::log1p(accel * half) / accel;
    }

    [[nodiscard]] const CavityGeometry& base() const noexcept { return base_; }
    [[nodiscard]] double length() const noexcept { return base_.length(); }
    [[nodiscard]] double mass() const noexcept { return base_.mass(); }
    [[nodiscard]] double accel() const noexcept { return accel_; }

    [[nodiscard]] double center() const noexcept { return 1.0 / accel_; }
    [[nodiscard]] double chi1() const noexcept { return 1.0 / accel_ - 0.5 * length(); }
    [[nodiscard]] double chi2() const noexcept { return 1.0 / accel_ + 0.5 * length(); }
    [[nodiscard]] double xi1() const noexcept { return xi1_; }
    [[nodiscard]] double xi2() const noexcept { return xi2_; }

    /// L' = ξ₂ - ξ₁ = ln((1 + aL/2)/(1 - aL/2)) / a
    [[nodiscard]] double effective_length() const noexcept { return xi2_ - xi1_; }

    /// ξ at proper offset x from the centre (χ = 1/a + x).
    [[nodiscard]] double xi_at_offset(double x) const { return std::log1p(accel_ * x) / accel_; }
    [[nodiscard]] double xi_at(double chi) const { return xi_at_offset(chi - center()); }

    /// Throws unless χ₁ ≤ χ ≤ χ₂ (to rounding).
    void check_inside(double chi) const {
        const double slack = 1e-12 * chi2();
        if (!(chi >= chi1() - slack && chi <= chi2() + slack))
            throw DomainError("chi = " + std::to_string(chi) + " outside the mirrors [" +
                              std::to_string(chi1()) + ", " + std::to_string(chi2()) + "]");
    }

    /// Offset x = χ - 1/a clamped to [-L/2, L/2] after check_inside.
    [[nodiscard]] double offset_of(double chi) const {
        check_inside(chi);
        const double half = 0.5 * length();
        return std::clamp(chi - center(), -half, half);
    }

private:
    CavityGeometry base_;
    double accel_;
    double xi1_ = 0.0;
    double xi2_ = 0.0;
};

/// One accelerated-cavity eigenmode. F(χ) = norm · p(χ; omega) for a massive
/// field, norm · sin(omega (ξ - ξ₁)) for a massless one.
struct RindlerMode {
    int k = 0;
    double omega = 0.0;
    double norm = 0.0;
};

/// Ω_k = kπ / L' for m = 0.
inline double massless_frequency(const RindlerGeometry& geom, int k) {
    if (k < 1)
        throw DomainError("mode index must be >= 1");
    return k * std::numbers::pi / geom.effective_length();
}

namespace detail {

using OdeState = std::array<double, 3>;

struct OdeShot {
    double z = 0.0;        // Z(ξ_end)
    double dz = 0.0;       // Z'(ξ_end)
    double z2_integral = 0.0; // ∫_{ξ_end}^{ξ₂} Z² dξ
};

inline constexpr double kOdeAbsTol = 1e-15;
inline constexpr double kOdeRelTol = 1e-13;

/// Integrates Z'' = (m² e^{2aξ} - Ω²) Z from ξ₂ (Z = 0, Z' = 1) down to xi_end.
inline OdeShot shoot(const RindlerGeometry& geom, double omega, double xi_end) {
    namespace odeint = boost::numeric::odeint;
    const double m2 = geom.mass() * geom.mass();
    const double two_a = 2.0 * geom.accel();
    const double omega2 = omega * omega;
    auto rhs = [&](const OdeState& s, OdeState& ds, double xi) {
        ds[0] = s[1];
        ds[1] = (m2 * std::exp(two_a * xi) - omega2) * s[0];
        ds[2] = s[0] * s[0];
    };
    OdeState state{0.0, 1.0, 0.0};
    if (xi_end < geom.xi2()) {
        auto stepper = odeint::make_controlled(kOdeAbsTol, kOdeRelTol,
                                               odeint::runge_kutta_fehlberg78<OdeState>());
        const double dt0 = -0.1 / std::max(omega, 1.0);
        odeint::integrate_adaptive(stepper, rhs, state, geom.xi2(), xi_end, dt0);
    }
    return {state[0], state[1], -state[2]};
}

// Profiles below take the offset x = χ - 1/a. At small a, χ itself is large
// and χ - 1/a would cost digits that the phase ν ln(χ/χ₂) cannot spare.

inline double profile_ode(const RindlerGeometry& geom, double omega, double x) {
    return omega * shoot(geom, omega, geom.xi_at_offset(x)).z;
}

// ν ln(χ/χ₂) = Ω (ξ - ξ₂)
inline double bessel_phase(const RindlerGeometry& geom, double omega, double x) {
    return omega * (geom.xi_at_offset(x) - geom.xi2());
}

// Accepted rounding error of a series cross product, relative to the larger
// of its value and the O(1) oscillation amplitude of p.
inline constexpr double kCrossTol = 1e-11;

// Rounding error of Im[e^{iθ} A_u conj(A_v)]: each factor carries its
// series' cancellation and θ its own rounding. Where the field is evanescent
// |A_u||A_v| grows exponentially while p does not.
inline double cross_rounding(double theta, double mag_u, double mag_v, double cancel_u,
                             double cancel_v) {
    return std::numeric_limits<double>::epsilon() * mag_u * mag_v *
           (4.0 + 2.0 * (cancel_u + cancel_v) + std::abs(theta));
}

inline std::optional<double> profile_bessel(const RindlerGeometry& geom, double omega, double x) {
    if (x >= 0.5 * geom.length())
        return 0.0;
    const double m = geom.mass();
    const BesselOrder order(omega / geom.accel());
    const auto su = try_reduced_series(order, m * (geom.center() + x));
    if (!su)
        return std::nullopt;
    const auto sv = try_reduced_series(order, m * geom.chi2());
    if (!sv)
        return std::nullopt;
    const double theta = bessel_phase(geom, omega, x);
    const double p = scaled_cross_from_phase(theta, su->value, sv->value);
    if (!std::isfinite(p))
        return std::nullopt;
    const double err = cross_rounding(theta, std::abs(su->value), std::abs(sv->value),
                                      su->cancellation, sv->cancellation);
    if (err > kCrossTol * std::max(1.0, std::abs(p)))
        return std::nullopt;
    return p;
}

/// p at offset x for a massive field, Bessel series first, ODE as fallback.
inline double massive_profile(const RindlerGeometry& geom, double omega, double x) {
    if (auto p = profile_bessel(geom, omega, x))
        return *p;
    return profile_ode(geom, omega, x);
}

/// Quantisation function g(Ω) = p(χ₁; Ω); its zeros are the eigenfrequencies.
inline double quantization_function(const RindlerGeometry& geom, double omega) {
    return massive_profile(geom, omega, -0.5 * geom.length());
}

} // namespace detail

/// Unnormalised massive profile p(χ; Ω) = |Γ(1+iΩ/a)|² S(Ω/a, mχ, mχ₂).
inline double mode_profile(const RindlerGeometry& geom, double omega, double chi) {
    if (geom.base().massless())
        throw DomainError("mode_profile: massive field required");
    return detail::massive_profile(geom, omega, geom.offset_of(chi));
}

struct EigenSolveOptions {
    double rel_tol = 1e-12;   // bracket width on each root
    double step_fraction = 0.2; // scan step / smallest predicted spacing
    int max_refinements = 4;  // step halvings before giving up
};

/// First k_max roots of g(Ω) = p(χ₁; Ω) for a massive field, ascending, with
/// norm left at zero (see normalize_mode).
///
/// Each eigenvalue Ω_k² lies in the window
///     [m²(1 - aL/2)² + (kπ/L')², m²(1 + aL/2)² + (kπ/L')²]
/// (the potential m² e^{2aξ} is bounded by its values at the mirrors). Windows
/// that do not overlap hold exactly one root and are bracketed at their ends;
/// overlapping windows are merged and scanned on a grid whose step is
/// step_fraction times the smaller of the massless and inertial spacings. The
/// k-th root found must fall inside the k-th window; otherwise the grid is
/// refined. Roots of the last cluster beyond k_max are dropped.
inline std::vector<RindlerMode> solve_eigenfrequencies(const RindlerGeometry& geom, int k_max,
                                                       const EigenSolveOptions& opt = {}) {
    if (geom.base().massless())
        throw DomainError("solve_eigenfrequencies: massive field required (use massless_frequency)");
    if (k_max < 1)
        throw DomainError("k_max must be >= 1");

    const double m = geom.mass();
    const double aL2 = 0.5 * geom.accel() * geom.length();
    const double v_min = m * m * (1.0 - aL2) * (1.0 - aL2);
    const double v_max = m * m * (1.0 + aL2) * (1.0 + aL2);
    const double lp = geom.effective_length();
    auto window = [&](int k) {
        const double kk = k * std::numbers::pi / lp;
        const double lo = std::sqrt(v_min + kk * kk);
        const double hi = std::sqrt(v_max + kk * kk);
        const double pad = 1e-10 * hi;
        return std::pair{lo - pad, hi + pad};
    };

    const double massless_spacing = std::numbers::pi / lp;
    const double inertial_spacing = mode_frequency(geom.base(), 2) - mode_frequency(geom.base(), 1);
    const double base_step = opt.step_fraction * std::min(massless_spacing, inertial_spacing);

    auto g = [&](double omega) { return detail::quantization_function(geom, omega); };

    for (int attempt = 0; attempt <= opt.max_refinements; ++attempt) {
        const double step = base_step / std::pow(2.0, attempt);
        std::vector<double> roots;
        roots.reserve(k_max);
        bool consistent = true;

        int k = 1;
        while (k <= k_max && consistent) {
            // cluster of mutually overlapping windows starting at k
            auto [lo, hi] = window(k);
            int last = k;
            while (last < k_max && window(last + 1).first <= hi) {
                ++last;
                hi = window(last).second;
            }
            const int expected = last - k + 1;

            std::vector<double> found;
            double x0 = lo, g0 = g(lo);
            if (expected == 1) {
                const double g1 = g(hi);
                if ((g0 > 0.0) != (g1 > 0.0) || g1 == 0.0 || g0 == 0.0)
                    found.push_back(brent_root(g, lo, hi, g0, g1, opt.rel_tol));
            } else {
                const int n_steps = static_cast<int>(std::ceil((hi - lo) / step));
                const double h = (hi - lo) / n_steps;
                for (int i = 1; i <= n_steps; ++i) {
                    const double x1 = (i == n_steps) ? hi : lo + i * h;
                    const double g1 = g(x1);
                    if (g0 == 0.0 || (g0 > 0.0) != (g1 > 0.0))
                        found.push_back(brent_root(g, x0, x1, g0, g1, opt.rel_tol));
                    x0 = x1;
                    g0 = g1;
                }
            }
            // a cluster cut off at k_max may also hold roots above Ω_{k_max}
            if (last == k_max && static_cast<int>(found.size()) > expected)
                found.resize(expected);
            if (static_cast<int>(found.size()) != expected) {
                consistent = false;
                break;
            }
            for (int i = 0; i < expected; ++i) {
                const auto [wlo, whi] = window(k + i);
                if (found[i] < wlo || found[i] > whi)
                    consistent = false;
                roots.push_back(found[i]);
            }
            k = last + 1;
        }
        if (consistent) {
            std::vector<RindlerMode> modes;
            modes.reserve(k_max);
            for (int i = 0; i < k_max; ++i)
                modes.push_back({i + 1, roots[i], 0.0});
            return modes;
        }
    }
    throw BracketingFailure("solve_eigenfrequencies: sign-change census disagrees with the "
                            "expected mode count",
                            window(1).first, window(k_max).second);
}

namespace detail {

// 2(Ω/a) ∫ p² dχ/χ = 2Ω ∫ p² dξ at an eigenvalue, from boundary data alone.
// With Z = p/Ω (Z(ξ₂) = 0, Z'(ξ₂) = 1) and W = ∂Z/∂Ω, (W Z' - W' Z)' = 2Ω Z²,
// so 2Ω ∫ Z² dξ = -Z'(ξ₁) W(ξ₁) once Z(ξ₁) = 0. Both factors come from the
// series and its derivatives. nullopt if the series is not usable.
inline std::optional<double> kg_norm_squared_bessel(const RindlerGeometry& geom, double omega) {
    const double a = geom.accel();
    const double m = geom.mass();
    const BesselOrder order(omega / a);
    const auto su = try_reduced_series_derivatives(order, m * geom.chi1());
    if (!su)
        return std::nullopt;
    const auto sv = try_reduced_series_derivatives(order, m * geom.chi2());
    if (!sv)
        return std::nullopt;

    const double theta = bessel_phase(geom, omega, -0.5 * geom.length());
    const Complex e = std::polar(1.0, theta);
    const Complex av = std::conj(sv->value);
    const double p = (e * su->value * av).imag();
    // dp/dξ = aχ dp/dχ, with dθ/dχ = ν/χ
    const double dp_dxi = (e * (Complex(0.0, omega) * su->value + a * su->x_dx) * av).imag();
    // ∂p/∂Ω at fixed χ₁; θ/Ω = ξ₁ - ξ₂ and ∂ν/∂Ω = 1/a
    const double dp_domega =
        (e * (Complex(0.0, theta / omega) * su->value * av +
              (su->d_nu * av + su->value * std::conj(sv->d_nu)) / a))
            .imag();
    const double mag_u = std::abs(su->value), mag_v = std::abs(sv->value);
    const double rounding = cross_rounding(theta, 1.0, 1.0, su->cancellation, sv->cancellation);
    const double err_dxi = rounding * (omega * mag_u + a * std::abs(su->x_dx)) * mag_v;
    const double err_domega =
        rounding * ((std::abs(theta / omega) * mag_u + std::abs(su->d_nu) / a) * mag_v +
                    mag_u * std::abs(sv->d_nu) / a);
    if (err_dxi > kCrossTol * std::abs(dp_dxi) || err_domega > kCrossTol * std::abs(dp_domega - p / omega))
        return std::nullopt;
    const double value = -dp_dxi * (dp_domega - p / omega);
    if (!(value > 0.0) || !std::isfinite(value))
        return std::nullopt;
    return value;
}

} // namespace detail

/// Fixes mode.norm so that 2(Ω/a) ∫_{χ₁}^{χ₂} F² dχ/χ = 1.
inline RindlerMode normalize_mode(const RindlerGeometry& geom, RindlerMode mode) {
    if (!(mode.omega > 0.0))
        throw DomainError("normalize_mode: eigenfrequency must be > 0");
    if (geom.base().massless()) {
        mode.norm = 1.0 / std::sqrt(mode.k * std::numbers::pi);
        return mode;
    }
    double norm_squared;
    if (auto bessel = detail::kg_norm_squared_bessel(geom, mode.omega)) {
        norm_squared = *bessel;
    } else {
        // ODE route: 2Ω ∫ p² dξ = 2Ω³ ∫ Z² dξ
        const auto shot = detail::shoot(geom, mode.omega, geom.xi1());
        norm_squared = 2.0 * mode.omega * mode.omega * mode.omega * shot.z2_integral;
        if (!(norm_squared > 0.0) || !std::isfinite(norm_squared))
            throw NumericalFailure("normalize_mode: vanishing norm at Omega = " +
                                   std::to_string(mode.omega));
    }
    mode.norm = 1.0 / std::sqrt(norm_squared);
    return mode;
}

/// Massless modes from the closed form, already normalised.
inline std::vector<RindlerMode> massless_modes(const RindlerGeometry& geom, int k_max) {
    std::vector<RindlerMode> modes;
    modes.reserve(k_max > 0 ? k_max : 0);
    for (int k = 1; k <= k_max; ++k)
        modes.push_back(normalize_mode(geom, {k, massless_frequency(geom, k), 0.0}));
    return modes;
}

/// Solved and normalised modes k = 1..k_max for either field type.
inline std::vector<RindlerMode> solve_modes(const RindlerGeometry& geom, int k_max) {
    if (geom.base().massless())
        return massless_modes(geom, k_max);
    auto modes = solve_eigenfrequencies(geom, k_max);
    for (auto& mode : modes)
        mode = normalize_mode(geom, mode);
    return modes;
}

/// F_{Ω_k} at proper offset x from the centre, -L/2 ≤ x ≤ L/2.
inline double mode_value_at_offset(const RindlerGeometry& geom, const RindlerMode& mode, double x) {
    const double half = 0.5 * geom.length();
    if (!(x >= -half && x <= half))
        throw DomainError("offset " + std::to_string(x) + " outside the mirrors");
    if (geom.base().massless()) {
        const double phase = mode.k * (geom.xi_at_offset(x) - geom.xi1()) / geom.effective_length();
        return mode.norm * sin_pi(phase);
    }
    return mode.norm * detail::massive_profile(geom, mode.omega, x);
}

/// F_{Ω_k}(χ).
inline double mode_value(const RindlerGeometry& geom, const RindlerMode& mode, double chi) {
    return mode_value_at_offset(geom, mode, geom.offset_of(chi));
}

/// Klein-Gordon product of two real modes, (Ω_j + Ω_k)/a ∫ F_j F_k dχ/χ, by
/// adaptive Simpson over the offset. Equals δ_jk for normalised eigenmodes.
inline double kg_inner_product(const RindlerGeometry& geom, const RindlerMode& a, const RindlerMode& b,
                               const SimpsonOptions& opt = {}) {
    const double half = 0.5 * geom.length();
    auto integrand = [&](double x) {
        return mode_value_at_offset(geom, a, x) * mode_value_at_offset(geom, b, x) /
               (geom.center() + x);
    };
    return (a.omega + b.omega) / geom.accel() * adaptive_simpson(integrand, -half, half, opt);
}

} // namespace rp
