#pragma once

// Complex gamma function and modified Bessel functions of the first kind with
// purely imaginary order, I_{iν}(x), for real x > 0 and ν ≥ 0.
//
// Evaluation is by the ascending series only. The series is written as
//
//     I_{iν}(x) = (x/2)^{iν} / Γ(1+iν) · A(ν, x),
//     A(ν, x)   = Σ_j (x²/4)^j / (j! (1+iν)_j),
//
// which keeps the huge factor 1/Γ(1+iν) ~ e^{πν/2} out of the summation.
// Inputs where the sum cancels badly (x² ≫ ν, x < ν) are rejected instead of
// being answered with lost digits.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>

#include "rindler_purcell/errors.hpp"

namespace rp {

using Complex = std::complex<double>;

/// Order ν of I_{iν}. Must be finite and non-negative; ν = 0 gives I₀.
class BesselOrder {
public:
    explicit BesselOrder(double nu) : nu_(nu) {
        if (!std::isfinite(nu) || nu < 0.0)
            throw DomainError("Bessel order must be finite and >= 0, got " + std::to_string(nu));
    }
    [[nodiscard]] double value() const noexcept { return nu_; }

private:
    double nu_;
};

namespace specfun_limits {
inline constexpr double kTermCutoff = 1e-16;
inline constexpr int kMaxTerms = 10000;
inline constexpr double kMaxArgument = 500.0;
// 1/|Γ(1+iν)| ~ e^{πν/2} overflows a double just above ν = 450.
inline constexpr double kMaxOrder = 400.0;
// The unscaled cross product carries sinh(πν)/(πν), which overflows above ν ≈ 225.
inline constexpr double kMaxCrossOrder = 220.0;
// Largest tolerated ratio max|term| / |sum| (about four lost digits).
inline constexpr double kMaxCancellation = 1e4;
} // namespace specfun_limits

namespace detail {

inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
inline constexpr double kLanczosG = 7.0;

} // namespace detail

/// Γ(z) by the Lanczos approximation (g = 7, nine coefficients), with the
/// reflection formula for Re z < 1/2. Throws DomainError at the poles.
inline Complex complex_gamma(Complex z) {
    using std::numbers::pi;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("complex_gamma: non-finite argument");
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw DomainError("complex_gamma: pole at non-positive integer " +
                          std::to_string(z.real()));
    if (z.real() < 0.5)
        return pi / (std::sin(pi * z) * complex_gamma(1.0 - z));

    z -= 1.0;
    Complex series = detail::kLanczos[0];
    for (std::size_t i = 1; i < detail::kLanczos.size(); ++i)
        series += detail::kLanczos[i] / (z + static_cast<double>(i));
    const Complex t = z + detail::kLanczosG + 0.5;
    return std::sqrt(2.0 * pi) * std::exp((z + 0.5) * std::log(t) - t) * series;
}

/// |Γ(1+iν)|² = πν / sinh(πν), exact.
inline double gamma_one_plus_i_squared_modulus(double nu) {
    using std::numbers::pi;
    if (nu == 0.0)
        return 1.0;
    return pi * nu / std::sinh(pi * nu);
}

/// Result of summing A(ν, x). `cancellation` is max|term| / |sum|.
struct ReducedSeries {
    Complex value;
    double cancellation = 1.0;
    int terms = 0;
};

/// Sums A(ν, x) = Σ_j (x²/4)^j / (j! (1+iν)_j) until |term| < 1e-16 |sum|.
/// Γ(j+1+iν) is carried implicitly by the upward recurrence (1+iν)_j.
inline ReducedSeries reduced_bessel_series(BesselOrder order, double x) {
    using namespace specfun_limits;
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("Bessel argument must be finite and > 0, got " + std::to_string(x));

    const double nu = order.value();
    const double quarter_x2 = 0.25 * x * x;
    Complex term = 1.0;
    Complex sum = 1.0;
    double peak = 1.0;
    for (int j = 1; j <= kMaxTerms; ++j) {
        const double jd = j;
        // term_j / term_{j-1} = (x²/4) / (j (j + iν)) = (x²/4)(j - iν) / (j (j² + ν²))
        term *= Complex(jd, -nu) * (quarter_x2 / (jd * (jd * jd + nu * nu)));
        sum += term;
        const double mag = std::abs(term);
        peak = std::max(peak, mag);
        if (mag < kTermCutoff * std::abs(sum)) {
            if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
                throw NumericalFailure("Bessel series overflowed at x = " + std::to_string(x));
            return {sum, peak / std::abs(sum), j + 1};
        }
    }
    throw NumericalFailure("Bessel series did not converge in " + std::to_string(kMaxTerms) +
                           " terms (nu = " + std::to_string(nu) + ", x = " + std::to_string(x) + ")");
}

/// A(ν, x) together with x ∂A/∂x and ∂A/∂ν, summed term by term:
///     x ∂t_j/∂x = 2j t_j,    ∂t_j/∂ν = -i t_j Σ_{l≤j} 1/(l + iν).
struct ReducedSeriesDerivatives {
    Complex value;
    Complex x_dx;
    Complex d_nu;
    double cancellation = 1.0;
    int terms = 0;
};

inline ReducedSeriesDerivatives reduced_bessel_series_derivatives(BesselOrder order, double x) {
    using namespace specfun_limits;
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("Bessel argument must be finite and > 0, got " + std::to_string(x));

    const double nu = order.value();
    const double quarter_x2 = 0.25 * x * x;
    Complex term = 1.0;
    Complex harmonic = 0.0;
    ReducedSeriesDerivatives out{1.0, 0.0, 0.0, 1.0, 1};
    double peak = 1.0;
    for (int j = 1; j <= kMaxTerms; ++j) {
        const double jd = j;
        term *= Complex(jd, -nu) * (quarter_x2 / (jd * (jd * jd + nu * nu)));
        harmonic += 1.0 / Complex(jd, nu);
        out.value += term;
        out.x_dx += 2.0 * jd * term;
        out.d_nu += Complex(0.0, -1.0) * harmonic * term;
        const double mag = std::abs(term);
        peak = std::max(peak, mag);
        const double scale = std::max({1.0, 2.0 * jd, std::abs(harmonic)});
        if (mag * scale < kTermCutoff * std::abs(out.value)) {
            if (!std::isfinite(std::abs(out.value)) || !std::isfinite(std::abs(out.x_dx)) ||
                !std::isfinite(std::abs(out.d_nu)))
                throw NumericalFailure("Bessel series overflowed at x = " + std::to_string(x));
            out.cancellation = peak / std::abs(out.value);
            out.terms = j + 1;
            return out;
        }
    }
    throw NumericalFailure("Bessel series did not converge in " + std::to_string(kMaxTerms) +
                           " terms (nu = " + std::to_string(nu) + ", x = " + std::to_string(x) + ")");
}

/// I_{iν}(x). I_{-iν}(x) is its complex conjugate for real x and ν.
/// Domain: 0 < x ≤ 500, ν ≤ 400, and a well-conditioned series.
inline Complex bessel_i_imag_order(BesselOrder order, double x) {
    using namespace specfun_limits;
    const double nu = order.value();
    if (x > kMaxArgument)
        throw DomainError("Bessel argument " + std::to_string(x) + " outside series domain");
    if (nu > kMaxOrder)
        throw DomainError("Bessel order " + std::to_string(nu) + " outside series domain");

    const ReducedSeries s = reduced_bessel_series(order, x);
    if (s.cancellation > kMaxCancellation)
        throw DomainError("Bessel series ill-conditioned at nu = " + std::to_string(nu) +
                          ", x = " + std::to_string(x));
    const Complex phase = std::polar(1.0, nu * std::log(0.5 * x));
    return phase * s.value / complex_gamma(Complex(1.0, nu));
}

namespace detail {

// Im[e^{iθ} A(u) conj(A(v))] with θ = ν ln(u/v) supplied by the caller, who
// may know it more accurately than the product of ν and a logarithm.
inline double scaled_cross_from_phase(double theta, Complex a_u, Complex a_v) {
    return (std::polar(1.0, theta) * a_u * std::conj(a_v)).imag();
}

inline double scaled_cross(double nu, double u, double v, Complex a_u, Complex a_v) {
    return scaled_cross_from_phase(nu * std::log(u / v), a_u, a_v);
}

// Reduced series, or nullopt when it fails or cancels beyond the limit.
inline std::optional<ReducedSeries> try_reduced_series(BesselOrder order, double x) {
    try {
        ReducedSeries s = reduced_bessel_series(order, x);
        if (s.cancellation > specfun_limits::kMaxCancellation)
            return std::nullopt;
        return s;
    } catch (const NumericalFailure&) {
        return std::nullopt;
    }
}

inline std::optional<ReducedSeriesDerivatives> try_reduced_series_derivatives(BesselOrder order,
                                                                             double x) {
    try {
        auto s = reduced_bessel_series_derivatives(order, x);
        if (s.cancellation > specfun_limits::kMaxCancellation)
            return std::nullopt;
        return s;
    } catch (const NumericalFailure&) {
        return std::nullopt;
    }
}

// Scaled cross product, or nullopt when either series is ill-conditioned.
inline std::optional<double> try_cross_product_scaled(BesselOrder order, double u, double v) {
    const auto su = try_reduced_series(order, u);
    const auto sv = try_reduced_series(order, v);
    if (!su || !sv)
        return std::nullopt;
    const double r = scaled_cross(order.value(), u, v, su->value, sv->value);
    if (!std::isfinite(r))
        return std::nullopt;
    return r;
}

} // namespace detail

/// |Γ(1+iν)|² · S(ν, u, v): the cross product with the ν-dependent scale
/// removed. Has the same zeros and signs as S and stays O(1) for large ν.
inline double bessel_cross_product_scaled(BesselOrder order, double u, double v) {
    if (!(u > 0.0) || !(v > 0.0))
        throw DomainError("bessel_cross_product: arguments must be > 0");
    if (u == v)
        return 0.0;
    if (u > v)
        return -bessel_cross_product_scaled(order, v, u);
    const auto r = detail::try_cross_product_scaled(order, u, v);
    if (!r)
        throw DomainError("bessel_cross_product: series ill-conditioned at nu = " +
                          std::to_string(order.value()) + ", u = " + std::to_string(u) +
                          ", v = " + std::to_string(v));
    return *r;
}

/// S(ν, u, v) = Im[I_{iν}(u) conj(I_{iν}(v))]
///            = (1/2i)[I_{iν}(u) I_{-iν}(v) - I_{-iν}(u) I_{iν}(v)].
/// Exactly real and antisymmetric in (u, v). Domain ν ≤ 220.
inline double bessel_cross_product(BesselOrder order, double u, double v) {
    if (order.value() > specfun_limits::kMaxCrossOrder)
        throw DomainError("bessel_cross_product: order " + std::to_string(order.value()) +
                          " overflows; use bessel_cross_product_scaled");
    return bessel_cross_product_scaled(order, u, v) /
           gamma_one_plus_i_squared_modulus(order.value());
}

} // namespace rp
