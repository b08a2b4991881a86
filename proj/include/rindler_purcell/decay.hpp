#pragma once

// Detector description and the mode-sum bookkeeping shared by the resting and
// accelerated decay probabilities.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rindler_purcell/cavity.hpp"
#include "rindler_purcell/errors.hpp"

namespace rp {

/// Where the detector sits: the cavity centre, or node j of resting mode n
/// (counted from the rear mirror).
class Placement {
public:
    static Placement center() { return Placement(0, 0); }

    static Placement node(int mode_n, int node_index) {
        if (mode_n < 2)
            throw DomainError("node placement needs resonant mode n >= 2");
        if (node_index < 1 || node_index > mode_n - 1)
            throw DomainError("node index must lie in 1.." + std::to_string(mode_n - 1));
        return Placement(mode_n, node_index);
    }

    [[nodiscard]] bool is_center() const noexcept { return mode_n_ == 0; }
    [[nodiscard]] int mode_n() const noexcept { return mode_n_; }
    [[nodiscard]] int node_index() const noexcept { return node_index_; }

    /// Proper distance from the cavity centre at rest: -L/2 + jL/n for a node.
    [[nodiscard]] double resting_offset(double length) const noexcept {
        if (is_center())
            return 0.0;
        return -0.5 * length + node_index_ * length / mode_n_;
    }

    [[nodiscard]] std::string label() const {
        return is_center() ? std::string("center") : "node" + std::to_string(node_index_);
    }

    friend bool operator==(const Placement&, const Placement&) = default;

private:
    Placement(int n, int j) : mode_n_(n), node_index_(j) {}
    int mode_n_;
    int node_index_;
};

/// Two-level detector switched on with constant coupling for proper time tau.
struct DetectorConfig {
    double omega = 0.0;   // gap frequency
    double epsilon = 1.0; // coupling, arbitrary units
    double tau = 0.0;     // interaction time
    Placement placement = Placement::center();

    void validate() const {
        if (!std::isfinite(omega) || omega <= 0.0)
            throw DomainError("detector frequency must be > 0");
        if (!std::isfinite(epsilon) || epsilon <= 0.0)
            throw DomainError("coupling must be > 0");
        if (!std::isfinite(tau) || tau < 0.0)
            throw DomainError("interaction time must be >= 0");
    }
};

/// Truncation and tail test for the mode sums.
struct SeriesControl {
    int k_max = 64;
    double rel_tol = 1e-10;
    int tail_terms = 5;
};

struct ModeTerm {
    int k = 0;
    double omega = 0.0;
    double term = 0.0;
};

struct DecayResult {
    double probability = 0.0;
    std::vector<ModeTerm> terms;
    int truncation_k = 0;
    bool converged = true;
};

/// |e^{iΔτ} - 1|² / Δ² written as τ² sinc²(Δτ/2); finite at Δ = 0.
inline double resonance_weight(double detuning, double tau) {
    const double x = 0.5 * detuning * tau;
    double sinc = 1.0;
    if (std::abs(x) < 1e-4)
        sinc = 1.0 - x * x / 6.0;
    else
        sinc = std::sin(x) / x;
    return tau * tau * sinc * sinc;
}

/// Sums the terms and applies the tail test: converged when each of the last
/// `tail_terms` terms is at most rel_tol times the total. Throws
/// NumericalFailure if the sum overflows.
inline DecayResult finish_decay(std::vector<ModeTerm> terms, const SeriesControl& control) {
    DecayResult out;
    for (const auto& t : terms)
        out.probability += t.term;
    if (!std::isfinite(out.probability))
        throw NumericalFailure("decay sum is not finite (overflow in tau^2 or a mode value)");
    out.truncation_k = terms.empty() ? 0 : terms.back().k;
    const std::size_t tail = std::min<std::size_t>(terms.size(), control.tail_terms);
    out.converged = true;
    for (std::size_t i = terms.size() - tail; i < terms.size(); ++i)
        if (terms[i].term > control.rel_tol * out.probability)
            out.converged = false;
    out.terms = std::move(terms);
    return out;
}

} // namespace rp
