#include <gtest/gtest.h>

#include "rskld/rmt.hpp"
#include "rskld/variational.hpp"

using namespace rskld;

TEST(Equilibrium, MassAndMeanConstraints) {
    for (double x : {0.5, 1.0, 1.5}) {
        const auto mu = equilibrium_measure(x);
        const auto mom = equilibrium_moments(mu);
        EXPECT_NEAR(mom.mass, 1.0, 1e-8) << x;
        EXPECT_NEAR(mom.mean, -x, 1e-8) << x;
        EXPECT_LT(mu.L, 0.0);
        EXPECT_NEAR(mu.density(mu.L), 0.0, 1e-12);
    }
}

TEST(Equilibrium, DensityNonnegative) {
    for (double x : {0.1, 0.5, 1.0, 1.5, 1.9, 1.999}) {
        const auto mu = equilibrium_measure(x);
        for (int i = 1; i <= 1000; ++i) {
            const double y = mu.L * (1.0 - i / 1001.0);
            ASSERT_GE(mu.density(y), -1e-12) << x << " " << y;
        }
    }
}

TEST(Equilibrium, SupportTendsToSemicircle) {
    const auto mu = equilibrium_measure(1.999);
    EXPECT_GE(mu.L, -4.01);
    EXPECT_LE(mu.L, -3.99);
    EXPECT_NEAR(mu.L, -3.999, 2e-3);
}

TEST(Equilibrium, DomainErrors) {
    EXPECT_THROW(equilibrium_measure(0.0), DomainError);
    EXPECT_THROW(equilibrium_measure(2.0), DomainError);
    EXPECT_THROW(equilibrium_measure(-1.0), DomainError);
}

TEST(KVariational, MatchesClosedForm) {
    for (double x : {0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 1.9})
        EXPECT_NEAR(rate_K_variational(x).value(), rate_K_closed(x).value(), 1e-6) << x;
    const double k19 = rate_K_variational(1.9).value();
    EXPECT_GE(k19, 0.0);
    EXPECT_LE(k19, rate_K_closed(1.9).value() + 1e-6);
}

TEST(SpectralRate, SemicircleDiscretization) {
    const double v = spectral_rate(DiscreteMeasure::semicircle(400));
    EXPECT_GE(v, -0.02);
    EXPECT_LE(v, 0.05);
    // Refinement moves the value toward zero.
    EXPECT_LT(std::abs(spectral_rate(DiscreteMeasure::semicircle(800))), std::abs(spectral_rate(DiscreteMeasure::semicircle(100))));
}

TEST(SpectralRate, DeltaPairIsFiniteAndDeterministic) {
    const DiscreteMeasure mu({{1.0, 0.5}, {-1.0, 0.5}});
    const double a = spectral_rate(mu);
    EXPECT_TRUE(std::isfinite(a));
    EXPECT_EQ(a, spectral_rate(DiscreteMeasure({{-1.0, 0.5}, {1.0, 0.5}})));
    // 1/2 - 2 (1/4) log 2 - 2 (1/4) log 2 - 3/4 with self widths equal to the spacing 2.
    EXPECT_NEAR(a, 0.5 - std::log(2.0) - 0.75, 1e-15);
}

TEST(SpectralRate, TracelessSampleNearZero) {
    RandomSource rs(31);
    const auto s = sample_traceless_spectrum(200, rs);
    EXPECT_LE(std::abs(spectral_rate(DiscreteMeasure::from_spectrum(s))), 0.1);
}

TEST(DiscreteMeasure, Validation) {
    EXPECT_THROW(DiscreteMeasure({}), std::invalid_argument);
    EXPECT_THROW(DiscreteMeasure({{0.0, 0.7}}), std::invalid_argument);
    EXPECT_THROW(DiscreteMeasure({{0.0, 1.5}, {1.0, -0.5}}), std::invalid_argument);
}

TEST(LegendreS, Examples) {
    EXPECT_EQ(legendre_S(0.0), 2.0);
    EXPECT_NEAR(legendre_S(rate_J_prime(1.0)), 1.0, 1e-10);
    const double s = legendre_S(-10.0);
    EXPECT_GT(s, -10.0);
    EXPECT_LT(s, -9.0);
    EXPECT_THROW(legendre_S(0.1), DomainError);
}

TEST(LegendreS, IncreasingInverse) {
    double prev = -1e300;
    for (double y = -50.0; y <= 0.0; y += 0.05) {
        const double s = legendre_S(y);
        ASSERT_GT(s, prev) << y;
        ASSERT_NEAR(rate_J_prime(s), y, 1e-9) << y;
        if (y < -6.0) {
            ASSERT_GT(s, y);
            ASSERT_LT(s, y + 1.0);
        }
        prev = s;
    }
}

TEST(KEta, EndpointsAreJAndK) {
    for (double x = -3.0; x <= 1.9 + 1e-12; x += 0.1)
        EXPECT_NEAR(rate_K_eta(x, 0.0).value(), rate_J(x).value(), 1e-6) << x;
    for (double x = 0.3; x <= 1.9 + 1e-12; x += 0.1)
        EXPECT_NEAR(rate_K_eta(x, 1.0).value(), rate_K_closed(x).value(), 1e-6) << x;
}

TEST(KEta, Examples) {
    EXPECT_EQ(rate_K_eta(3.0, 0.5).value(), 0.0);
    EXPECT_TRUE(rate_K_eta(-0.5, 1.0).is_infinite());
    EXPECT_TRUE(rate_K_eta(0.0, 1.0).is_infinite());
    EXPECT_THROW(rate_K_eta(1.0, 1.5), DomainError);
}

TEST(KEta, MonotoneInXAndEta) {
    const std::vector<double> etas{0.0, 0.25, 0.5, 0.75, 1.0};
    for (double x = 0.1; x < 2.0; x += 0.1) {
        for (std::size_t i = 1; i < etas.size(); ++i)
            EXPECT_GE(rate_K_eta(x, etas[i]).value(), rate_K_eta(x, etas[i - 1]).value() - 1e-9) << x;
        for (double eta : etas) EXPECT_LE(rate_K_eta(x + 0.1, eta).value(), rate_K_eta(x, eta).value() + 1e-9);
    }
}

TEST(KEta, AsymptoticsAgreeInTheTail) {
    for (double eta : {0.0, 0.5}) {
        const double x = -30.0;
        EXPECT_NEAR(rate_K_eta(x, eta).value() / k_eta_asymptotic(x, eta), 1.0, 2e-3) << eta;
    }
    EXPECT_LE(std::abs(rate_K_eta(1e-4, 1.0).value() - k_eta_asymptotic(1e-4, 1.0)), 8.0);
}

TEST(InfConvolution, Examples) {
    EXPECT_LE(inf_convolution_check(1.0, 1.0).residual, 1e-4);
    EXPECT_LE(inf_convolution_check(0.0, 0.25).residual, 1e-4);
    for (double eta : {0.25, 0.5, 1.0}) {
        const auto r = inf_convolution_check(2.0, eta);
        EXPECT_LE(r.residual, 1e-8);
        EXPECT_EQ(r.J, 0.0);
    }
    EXPECT_THROW(inf_convolution_check(2.5, 0.5), DomainError);
    EXPECT_THROW(inf_convolution_check(1.0, 0.0), DomainError);
}

TEST(GaussianRate, Definition) {
    EXPECT_EQ(gaussian_rate_G(1.0, 0.5), 0.0);
    EXPECT_EQ(gaussian_rate_G(-1.0, 0.5), 1.0);
    EXPECT_THROW(gaussian_rate_G(-1.0, 0.0), DomainError);
}
