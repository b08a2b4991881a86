#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rindler_purcell/detector.hpp"
#include "rindler_purcell/roots.hpp"

using namespace rp;
using std::numbers::pi;

namespace {

RindlerGeometry geometry(double length, double mass, double accel) {
    return RindlerGeometry(CavityGeometry(length, mass), accel);
}

DecayResult accelerated(const RindlerGeometry& g, const std::vector<RindlerMode>& modes,
                        const DetectorConfig& det) {
    return g.base().massless() ? decay_probability_massless(g, det)
                               : decay_probability_accelerated(g, modes, det);
}

} // namespace

TEST(NodePositions, Examples) {
    const auto g = geometry(1.0, 1.0, 1.0);
    const auto two = node_positions(g, 2);
    ASSERT_EQ(two.size(), 1u);
    EXPECT_EQ(two[0], g.center());

    const auto three = node_positions(g, 3);
    ASSERT_EQ(three.size(), 2u);
    EXPECT_NEAR(three[0], 5.0 / 6.0, 1e-15);
    EXPECT_NEAR(three[1], 7.0 / 6.0, 1e-15);

    const auto four = node_positions(geometry(2.0, 0.0, 0.3), 4);
    EXPECT_EQ(four[1], 1.0 / 0.3);
    for (std::size_t i = 1; i < four.size(); ++i)
        EXPECT_GT(four[i], four[i - 1]);
    EXPECT_THROW(node_positions(g, 1), DomainError);
}

TEST(AcceleratedDecay, ZeroInteractionTime) {
    for (double m : {0.0, 1.0}) {
        const auto g = geometry(1.0, m, 0.7);
        const auto modes = m > 0 ? solve_modes(g, 64) : std::vector<RindlerMode>{};
        const auto det = resonant_detector(g.base(), 2, Placement::center(), 0.0);
        EXPECT_EQ(accelerated(g, modes, det).probability, 0.0);
    }
}

TEST(AcceleratedDecay, InertialLimitMatchesRestingCavity) {
    const auto g = geometry(1.0, 1.0, 1e-3);
    const auto modes = solve_modes(g, 64);
    const auto det = resonant_detector(g.base(), 2, Placement::center(), 10.0);
    const double acc = decay_probability_accelerated(g, modes, det).probability;
    const double rest = decay_probability_rest(g.base(), det, 0.0).probability;
    EXPECT_LT(std::abs(acc - rest) / rest, 1e-3);
}

TEST(AcceleratedDecay, SingleResonantModeLimit) {
    const auto g = geometry(1.0, 1.0, 0.4);
    const auto modes = solve_modes(g, 3);
    const std::vector<RindlerMode> only{modes[1]};
    auto det = resonant_detector(g.base(), 2, Placement::center(), 1e-3);
    det.omega = modes[1].omega;
    const double f = mode_value(g, modes[1], g.center());
    EXPECT_NEAR(decay_probability_accelerated(g, only, det).probability, f * f * 1e-6, 1e-20);
    det.omega = modes[1].omega * (1.0 + 1e-9);
    EXPECT_NEAR(decay_probability_accelerated(g, only, det).probability, f * f * 1e-6, 1e-18);
}

TEST(AcceleratedDecay, QuadraticInCoupling) {
    for (double m : {0.0, 2.0}) {
        const auto g = geometry(1.0, m, 0.9);
        const auto modes = m > 0 ? solve_modes(g, 64) : std::vector<RindlerMode>{};
        for (const auto placement : {Placement::center(), Placement::node(3, 1), Placement::node(3, 2)}) {
            auto det = resonant_detector(g.base(), 3, placement, 50.0, 1.0);
            const double p1 = accelerated(g, modes, det).probability;
            det.epsilon = 2.0;
            EXPECT_EQ(accelerated(g, modes, det).probability, 4.0 * p1);
            det.epsilon = 0.3;
            const double p3 = accelerated(g, modes, det).probability;
            det.epsilon = 0.6;
            EXPECT_NEAR(accelerated(g, modes, det).probability, 4.0 * p3, 1e-14 * p3);
        }
    }
}

TEST(AcceleratedDecay, NormalisationIndependentOfCoupling) {
    const auto g = geometry(1.0, 1.0, 0.5);
    const auto modes = solve_modes(g, 4);
    const auto again = solve_modes(g, 4);
    for (std::size_t i = 0; i < modes.size(); ++i)
        EXPECT_EQ(modes[i].norm, again[i].norm);
}

TEST(AcceleratedDecay, TermsNonNegativeAndSummed) {
    const auto g = geometry(1.3, 0.8, 1.1);
    const auto modes = solve_modes(g, 64);
    for (int n : {2, 3, 5})
        for (int j = 1; j < n; ++j) {
            const auto det = resonant_detector(g.base(), n, Placement::node(n, j), 23.0);
            const auto r = decay_probability_accelerated(g, modes, det);
            double sum = 0.0;
            for (const auto& t : r.terms) {
                EXPECT_GE(t.term, 0.0);
                sum += t.term;
            }
            EXPECT_EQ(sum, r.probability);
            EXPECT_EQ(r.truncation_k, 64);
        }
}

TEST(AcceleratedDecay, NodeNullAtRest) {
    const double a = 1e-4, tau = 50.0;
    const auto g = geometry(1.0, 1.0, a);
    const auto modes = solve_modes(g, 6);
    for (int n : {2, 3, 4, 5}) {
        const auto& resonant = modes[n - 1];
        const double antinode = mode_value_at_offset(g, resonant, -0.5 + 0.5 / n);
        const double reference = antinode * antinode * tau * tau;
        for (int j = 1; j < n; ++j) {
            const auto det = resonant_detector(g.base(), n, Placement::node(n, j), tau);
            const auto r = decay_probability_accelerated(g, modes, det);
            EXPECT_LT(r.terms[n - 1].term, 1e-6 * reference) << n << "," << j;
        }
    }
}

TEST(AcceleratedDecay, FiniteAndContinuousThroughCrossing) {
    // Ω₃(a) falls through ω₂ near a ≈ 1.71 for L = 1, m = 1
    const CavityGeometry base(1.0, 1.0);
    const double w2 = mode_frequency(base, 2);
    auto gap = [&](double a) { return solve_eigenfrequencies(RindlerGeometry(base, a), 3)[2].omega - w2; };
    const double cross = brent_root(gap, 1.5, 1.95, gap(1.5), gap(1.95), 1e-12);
    EXPECT_NEAR(gap(cross), 0.0, 1e-9);

    auto prob = [&](double a) {
        const RindlerGeometry g(base, a);
        const auto det = resonant_detector(base, 2, Placement::center(), 50.0);
        return decay_probability_accelerated(g, solve_modes(g, 64), det).probability;
    };
    // smooth at zero detuning: the second difference is O(h²)
    const double h = 1e-5;
    const double pm = prob(cross - h), p0 = prob(cross), pp = prob(cross + h);
    ASSERT_TRUE(std::isfinite(p0));
    EXPECT_LT(std::abs(pp - 2 * p0 + pm), 1e-4 * p0);
    EXPECT_LT(std::abs(pp - pm), 1e-2 * p0);

    // Lipschitz across a window of several lobes: halving the step halves the largest jump
    auto largest_jump = [&](double step) {
        double worst = 0.0, last = prob(cross - 0.05);
        for (double a = cross - 0.05 + step; a <= cross + 0.05; a += step) {
            const double p = prob(a);
            EXPECT_TRUE(std::isfinite(p) && p > 0.0) << a;
            worst = std::max(worst, std::abs(p - last));
            last = p;
        }
        return worst;
    };
    const double coarse = largest_jump(1e-3), fine = largest_jump(5e-4);
    EXPECT_NEAR(coarse / fine, 2.0, 0.3);
}

TEST(MasslessDecay, SineFactorAtUnitAcceleration) {
    // k = 2, L = 1, a = 1: sin²(2π ln2 / ln3)
    const auto g = geometry(1.0, 0.0, 1.0);
    auto det = resonant_detector(g.base(), 2, Placement::center(), 1e-4);
    det.omega = massless_frequency(g, 2);
    const auto r = decay_probability_massless(g, det);
    const double sin2 = r.terms[1].term * 2 * pi / (1e-4 * 1e-4);
    EXPECT_NEAR(sin2, 0.537223270799, 1e-11);
    EXPECT_NEAR(sin2, std::pow(std::sin(2 * pi * std::log(2.0) / std::log(3.0)), 2), 1e-14);
}

TEST(MasslessDecay, RestingLimitAtCentre) {
    const auto g = geometry(1.0, 0.0, 1e-7);
    const auto det = resonant_detector(g.base(), 2, Placement::center(), 5.0);
    const auto acc = decay_probability_massless(g, det);
    const auto rest = decay_probability_rest(g.base(), det);
    for (std::size_t i = 0; i < acc.terms.size(); ++i) {
        if (acc.terms[i].k % 2 == 0)
            EXPECT_LT(acc.terms[i].term, 1e-12);
        EXPECT_NEAR(acc.terms[i].term, rest.terms[i].term, 1e-6 * rest.probability);
    }
}

TEST(MasslessDecay, AgreesWithNearlyMasslessSolver) {
    const auto g0 = geometry(1.0, 0.0, 0.8);
    const auto gm = geometry(1.0, 1e-6, 0.8);
    const auto det = resonant_detector(g0.base(), 2, Placement::center(), 20.0);
    const double p0 = decay_probability_massless(g0, det).probability;
    const double pm = decay_probability_accelerated(gm, solve_modes(gm, 64), det).probability;
    EXPECT_LT(std::abs(p0 - pm) / p0, 1e-4);
}

TEST(MasslessDecay, RequiresMasslessField) {
    const auto g = geometry(1.0, 1.0, 0.8);
    const auto det = resonant_detector(g.base(), 2, Placement::center(), 20.0);
    EXPECT_THROW(decay_probability_massless(g, det), DomainError);
    SeriesControl none;
    none.k_max = 0;
    EXPECT_THROW(decay_probability_massless(geometry(1.0, 0.0, 0.8), det, none), DomainError);
}

TEST(AcceleratedDecay, OverflowIsANumericalFailure) {
    const auto g = geometry(1.0, 0.0, 0.8);
    const auto det = resonant_detector(g.base(), 2, Placement::center(), 1e200);
    EXPECT_THROW(decay_probability_massless(g, det), NumericalFailure);
}
