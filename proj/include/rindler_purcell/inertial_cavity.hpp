#pragma once

// Closed-form modes of the cavity at rest and the resting detector's decay
// probability.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rindler_purcell/cavity.hpp"
#include "rindler_purcell/decay.hpp"

namespace rp {

/// sin(πt), exactly zero at integer t.
inline double sin_pi(double t) {
    const double r = std::remainder(t, 2.0);
    if (r == std::floor(r))
        return 0.0;
    return std::sin(std::numbers::pi * r);
}

struct InertialMode {
    int k = 0;
    double omega = 0.0;
};

/// ω_k = sqrt((kπ/L)² + m²)
inline double mode_frequency(const CavityGeometry& geom, int k) {
    if (k < 1)
        throw DomainError("mode index must be >= 1, got " + std::to_string(k));
    const double kl = k * std::numbers::pi / geom.length();
    return std::sqrt(kl * kl + geom.mass() * geom.mass());
}

inline std::vector<InertialMode> inertial_spectrum(const CavityGeometry& geom, int k_max) {
    std::vector<InertialMode> out;
    out.reserve(k_max > 0 ? k_max : 0);
    for (int k = 1; k <= k_max; ++k)
        out.push_back({k, mode_frequency(geom, k)});
    return out;
}

/// F_k(x) = sin(kπ(x + L/2)/L) / sqrt(ω_k L), x measured from the centre.
inline double mode_function(const CavityGeometry& geom, int k, double x) {
    const double half = 0.5 * geom.length();
    if (!(x >= -half && x <= half))
        throw DomainError("position " + std::to_string(x) + " outside the mirrors");
    const double omega = mode_frequency(geom, k);
    return sin_pi(k * (x + half) / geom.length()) / std::sqrt(omega * geom.length());
}

/// Decay probability of a detector at rest at offset x0 from the centre:
/// Σ_k ε² F_k(x0)² τ² sinc²((ω_k - ω)τ/2), truncated at control.k_max.
inline DecayResult decay_probability_rest(const CavityGeometry& geom, const DetectorConfig& det,
                                          double x0, const SeriesControl& control = {}) {
    det.validate();
    if (control.k_max < 1)
        throw DomainError("k_max must be >= 1");
    if (!det.placement.is_center() && control.k_max < det.placement.mode_n())
        throw DomainError("k_max must reach the resonant mode");

    std::vector<ModeTerm> terms;
    terms.reserve(control.k_max);
    const double eps2 = det.epsilon * det.epsilon;
    for (int k = 1; k <= control.k_max; ++k) {
        const double omega_k = mode_frequency(geom, k);
        const double f = mode_function(geom, k, x0);
        terms.push_back({k, omega_k, eps2 * f * f * resonance_weight(omega_k - det.omega, det.tau)});
    }
    return finish_decay(std::move(terms), control);
}

/// Same, with the position taken from the detector's placement.
inline DecayResult decay_probability_rest(const CavityGeometry& geom, const DetectorConfig& det,
                                          const SeriesControl& control = {}) {
    return decay_probability_rest(geom, det, det.placement.resting_offset(geom.length()), control);
}

/// Detector tuned to resting mode n: ω = ω_n.
inline DetectorConfig resonant_detector(const CavityGeometry& geom, int n, Placement placement,
                                        double tau, double epsilon = 1.0) {
    DetectorConfig det;
    det.omega = mode_frequency(geom, n);
    det.epsilon = epsilon;
    det.tau = tau;
    det.placement = placement;
    det.validate();
    return det;
}

} // namespace rp
