#include <gtest/gtest.h>

#include <cmath>

#include "watts/errors.hpp"
#include "watts/formulas.hpp"
#include "watts/harness.hpp"
#include "watts/identity_lab.hpp"

using namespace wlab;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double cardy_at(double v3, double W, double v1, double v2) {
    return cardy(CrossRatio(cross_ratio_of(v3, W, v1, v2)));
}

// Signed corner sum of cardy over the cube of side e centred at (v3, v1, v2).
double box_mass(double v3, double W, double v1, double v2, double e) {
    double sum = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                sum += ((i + j + k) % 2 ? -1.0 : 1.0) *
                       cardy_at(v3 - e / 2 + i * e, W, v1 - e / 2 + j * e, v2 - e / 2 + k * e);
    return sum;
}

// kappa d_W log of the box mass, Richardson-extrapolated in the W step
// and in the box size.
double box_drift(const EvalPoint& p, double e, double kappa = 6.0) {
    auto dlog = [&](double d) {
        return (std::log(box_mass(p.v3, p.W + d, p.v1, p.v2, e)) - std::log(box_mass(p.v3, p.W - d, p.v1, p.v2, e))) /
               (2 * d);
    };
    const double d = 2e-3;
    return kappa * (4.0 * dlog(d / 2) - dlog(d)) / 3.0;
}

}  // namespace

TEST(EvalPoints, Validation) {
    EXPECT_NO_THROW(validate(EvalPoint{}));
    EXPECT_THROW(validate(EvalPoint{0.5, 0.0, 1.0, 2.0}), OrderingError);
    EXPECT_THROW(validate(EvalPoint{-1.0, 0.0, 1.0, 1.0005}), DegenerateError);
    EXPECT_NO_THROW(validate(EvalPoint{-1.0, 0.0, 1.0, 1.0005}, 1e-4));
    EXPECT_DOUBLE_EQ(cross_ratio_of(EvalPoint{}), 0.25);
}

TEST(Reports, RelativeResidualDefinition) {
    const ResidualReport r = make_report(-2e-3, 4.0);
    EXPECT_DOUBLE_EQ(r.relative_residual, 5e-4);
    EXPECT_EQ(make_report(0.0, 0.0).relative_residual, 0.0);
}

TEST(Generator, TrivialFields) {
    const EvalPoint p{-1.3, 0.2, 0.9, 2.5};
    EXPECT_NEAR(generator_L([](const EvalPoint&) { return 1.0; }, p), 0.0, 1e-12);
    EXPECT_NEAR(generator_L([](const EvalPoint& q) { return q.W; }, p), 0.0, 1e-9);
    EXPECT_NEAR(generator_L([](const EvalPoint& q) { return q.v1; }, p), 2.0 / (p.v1 - p.W), 1e-8);
    Partials d;
    d.dWW = 1.0;
    EXPECT_DOUBLE_EQ(generator_L(d, p, 6.0), 3.0);
    EXPECT_THROW(generator_L(d, p, 0.0), std::invalid_argument);
}

TEST(Martingale, CardyAtReferencePoints) {
    for (const EvalPoint& p : {EvalPoint{-1.0, 0.0, 1.0, 2.0}, EvalPoint{-5.0, 0.0, 1.0, 1.5}}) {
        EXPECT_LE(martingale_residual_cardy(p).relative_residual, 1e-5);
        EXPECT_LE(martingale_residual_cardy(p, 6.0, Derivatives::FiniteDifference).relative_residual, 1e-5);
    }
}

TEST(Martingale, KappaSpecific) {
    EXPECT_GT(martingale_residual_cardy({-1.0, 0.0, 1.0, 2.0}, 5.0).relative_residual, 1e-2);
    EXPECT_GT(martingale_residual_cardy({-1.0, 0.0, 1.0, 2.0}, 8.0).relative_residual, 1e-2);
}

TEST(Martingale, FiniteDifferenceOrder) {
    const EvalPoint p{-1.0, 0.0, 1.0, 2.0};
    FdConfig coarse;
    coarse.richardson = false;
    coarse.first_step_rel = 4e-2;
    coarse.second_step_rel = 4e-2;
    FdConfig fine = coarse;
    fine.first_step_rel /= 2;
    fine.second_step_rel /= 2;
    const double r1 = std::abs(martingale_residual_cardy(p, 6.0, Derivatives::FiniteDifference, coarse).residual);
    const double r2 = std::abs(martingale_residual_cardy(p, 6.0, Derivatives::FiniteDifference, fine).residual);
    EXPECT_GE(std::log2(r1 / r2), 1.8);
    const auto fc = [](const EvalPoint& q) { return conditional_f(CrossRatio(cross_ratio_of(q))); };
    const double l1 = std::abs(conditioned_generator_L1(fc, p, 6.0, coarse));
    const double l2 = std::abs(conditioned_generator_L1(fc, p, 6.0, fine));
    EXPECT_GE(std::log2(l1 / l2), 1.8);
}

TEST(Drift, FrozenValueAndBoxOracle) {
    const EvalPoint p{-1.0, 0.0, 1.0, 2.0};
    EXPECT_LE(rel(drift(p), -70.0 / 13.0), 1e-10);
    const double d1 = box_drift(p, 1e-2);
    const double d2 = box_drift(p, 5e-3);
    const double extrapolated = (4.0 * d2 - d1) / 3.0;
    EXPECT_LE(rel(extrapolated, drift(p)), 1e-4);
    EXPECT_LE(rel(d2, drift(p)), 1e-3);
}

TEST(Drift, ScalingAndTranslation) {
    const EvalPoint p{-0.8, 0.1, 0.7, 3.0};
    for (double l : {0.5, 4.0}) {
        const EvalPoint q{l * p.v3, l * p.W, l * p.v1, l * p.v2};
        EXPECT_LE(rel(drift(q), drift(p) / l), 1e-10);
    }
    for (double c : {-3.0, 11.0}) {
        const EvalPoint q{p.v3 + c, p.W + c, p.v1 + c, p.v2 + c};
        EXPECT_LE(rel(drift(q), drift(p)), 1e-9);
    }
    EXPECT_LE(rel(drift(p, 3.0), drift(p) / 2.0), 1e-14);
}

TEST(L1, ConditionalFIsHarmonic) {
    for (const EvalPoint& p : {EvalPoint{-1.0, 0.0, 1.0, 2.0}, EvalPoint{-5.0, 0.0, 1.0, 1.5}, EvalPoint{-0.1, 0.0, 3.0, 3.2}}) {
        EXPECT_LE(l1_residual_f(p).relative_residual, 1e-5);
        EXPECT_LE(l1_residual_f(p, 6.0, Derivatives::FiniteDifference).relative_residual, 1e-5);
    }
    EXPECT_NEAR(conditioned_generator_L1([](const EvalPoint&) { return 1.0; }, EvalPoint{}), 0.0, 1e-12);
}

TEST(L1, CardyIsNotHarmonicForTheConditionedDiffusion) {
    const EvalPoint p{-1.0, 0.0, 1.0, 2.0};
    const Partials d = analytic_partials([](auto... x) { return cardy_field(x...); }, p);
    EXPECT_GT(l1_residual(d, p).relative_residual, 1e-2);
}

TEST(Ode, ConditionalFSolvesIt) {
    for (double s : {0.1, 0.5, 0.9}) EXPECT_LE(ode_residual_f(s).relative_residual, 1e-7) << s;
    EXPECT_THROW(ode_residual_f(0.995), std::domain_error);
}

TEST(Ode, PerturbationIsDetected) {
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const auto j = conditional_f_of(MultiDual<2>::variable(s, 0b11));
        const double f1 = j[0b01] + 0.01 * (1.0 - 2.0 * s);
        const double f2 = j[0b11] - 0.02;
        EXPECT_GT(ode_residual(s, f1, f2).relative_residual, 1e-3) << s;
    }
}

TEST(Contiguity, Grid) {
    for (int k = 1; k < 100; ++k) EXPECT_LE(contiguity_residual(0.01 * k).relative_residual, 1e-11);
}

TEST(TripleDerivative, MatchesConditionalDensity) {
    for (const TripodDensityPoint& p : {TripodDensityPoint{-1.0, 1.0, 2.0}, TripodDensityPoint{-0.5, 0.5, 10.0},
                                        TripodDensityPoint{-3.0, 0.2, 0.4}})
        EXPECT_LE(triple_derivative_match(p).relative_residual, 1e-6);
}

TEST(BoundaryPlanes, ClosedFormLimits) {
    auto t = [](double v3, double v1, double v2) { return tripod(CrossRatio(cross_ratio_of(v3, 0.0, v1, v2))); };
    auto c = [](double v3, double v1, double v2) { return cardy(CrossRatio(cross_ratio_of(v3, 0.0, v1, v2))); };
    // v3 up to the seed: s -> 0 and both curves vanish.
    EXPECT_LT(t(-1e-9, 1.0, 2.0), 2e-3);
    EXPECT_LT(c(-1e-9, 1.0, 2.0), 2e-3);
    // v1 down to the seed: s -> 1, tripod -> 1/2, cardy -> 1.
    EXPECT_NEAR(t(-1.0, 1e-9, 2.0), 0.5, 1e-3);
    EXPECT_NEAR(c(-1.0, 1e-9, 2.0), 1.0, 2e-3);
    // v2 down to v1: s -> 0.
    EXPECT_LT(t(-1.0, 1.0, 1.0 + 1e-9), 2e-3);
}

TEST(Grid, IdentityGridHitsTheTargetCrossRatios) {
    const auto pts = identity_grid(50, 0.02, 0.98);
    ASSERT_EQ(pts.size(), 50u);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        EXPECT_NO_THROW(validate(pts[k]));
        EXPECT_NEAR(cross_ratio_of(pts[k]), 0.02 + 0.96 * k / 49.0, 1e-12);
    }
}
