#pragma once

// Decay probability of a detector co-accelerating with the cavity.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "rindler_purcell/decay.hpp"
#include "rindler_purcell/rindler_cavity.hpp"

namespace rp {

/// Positions 1/a - L/2 + jL/n, j = 1..n-1: the nodes of resting mode n,
/// carried along with the accelerated cavity. Ascending in χ.
inline std::vector<double> node_positions(const RindlerGeometry& geom, int n) {
    if (n < 2)
        throw DomainError("node_positions: n must be >= 2");
    std::vector<double> out;
    out.reserve(n - 1);
    for (int j = 1; j < n; ++j)
        out.push_back(geom.center() + Placement::node(n, j).resting_offset(geom.length()));
    return out;
}

/// χ of the detector for a given placement.
inline double detector_chi(const RindlerGeometry& geom, const Placement& placement) {
    return geom.center() + placement.resting_offset(geom.length());
}

/// Σ_k ε² F_{Ω_k}(χ_d)² τ² sinc²((Ω_k - ω)τ/2) over the supplied modes.
///
/// Each term equals |ε F (e^{i(Ω_k-ω)τ} - 1) / (Ω_k - ω)|² away from
/// resonance and is continuous through Ω_k = ω. The detector frequency ω is
/// taken as given (normally the resting resonance ω_n; it is not retuned
/// with a).
inline DecayResult decay_probability_accelerated(const RindlerGeometry& geom,
                                                 std::span<const RindlerMode> modes,
                                                 const DetectorConfig& det,
                                                 const SeriesControl& control = {}) {
    det.validate();
    const double x = det.placement.resting_offset(geom.length());

    std::vector<ModeTerm> terms;
    terms.reserve(modes.size());
    const double eps2 = det.epsilon * det.epsilon;
    for (const auto& mode : modes) {
        const double f = mode_value_at_offset(geom, mode, x);
        terms.push_back(
            {mode.k, mode.omega, eps2 * f * f * resonance_weight(mode.omega - det.omega, det.tau)});
    }
    return finish_decay(std::move(terms), control);
}

/// Massless field, closed form: Σ_k (ε²/kπ) sin²(kπ(ξ_d - ξ₁)/L') τ² sinc²((Ω_k - ω)τ/2)
/// with Ω_k = kπ/L'. At the centre (ξ_d - ξ₁)/L' = -ln(1 - aL/2)/(aL').
///
/// The oscillating factor is taken as the modulus squared |e^{-iΔτ} - 1|²,
/// as in the resting and massive sums.
inline DecayResult decay_probability_massless(const RindlerGeometry& geom, const DetectorConfig& det,
                                              const SeriesControl& control = {}) {
    det.validate();
    if (!geom.base().massless())
        throw DomainError("decay_probability_massless: field mass must be 0");
    if (control.k_max < 1)
        throw DomainError("k_max must be >= 1");
    const double x = det.placement.resting_offset(geom.length());
    const double fraction = (geom.xi_at_offset(x) - geom.xi1()) / geom.effective_length();
    std::vector<ModeTerm> terms;
    terms.reserve(control.k_max);
    const double eps2 = det.epsilon * det.epsilon;
    for (int k = 1; k <= control.k_max; ++k) {
        const double omega_k = massless_frequency(geom, k);
        const double s = sin_pi(k * fraction);
        const double shape = s * s / (k * std::numbers::pi);
        terms.push_back({k, omega_k, eps2 * shape * resonance_weight(omega_k - det.omega, det.tau)});
    }
    return finish_decay(std::move(terms), control);
}

} // namespace rp
