#pragma once

#include <cmath>
#include <string>

#include "rindler_purcell/errors.hpp"

namespace rp {

/// Ideal 1+1 dimensional cavity: proper length L between Dirichlet mirrors,
/// field mass m. Natural units (ħ = c = 1).
class CavityGeometry {
public:
    CavityGeometry(double length, double mass) : length_(length), mass_(mass) {
        if (!std::isfinite(length) || length <= 0.0)
            throw DomainError("cavity length must be > 0, got " + std::to_string(length));
        if (!std::isfinite(mass) || mass < 0.0)
            throw DomainError("field mass must be >= 0, got " + std::to_string(mass));
    }

    [[nodiscard]] double length() const noexcept { return length_; }
    [[nodiscard]] double mass() const noexcept { return mass_; }
    [[nodiscard]] bool massless() const noexcept { return mass_ == 0.0; }

private:
    double length_;
    double mass_;
};

} // namespace rp
