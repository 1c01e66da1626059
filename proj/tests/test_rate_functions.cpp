#include <gtest/gtest.h>

#include <random>

#include "rskld/quadrature.hpp"
#include "rskld/rate_functions.hpp"

using namespace rskld;

namespace {
double J(double x) { return rate_J(x).value(); }
double K(double x) { return rate_K_closed(x).as_double(); }
}  // namespace

TEST(RateValue, InfinityIsTagged) {
    EXPECT_TRUE(RateValue::infinity().is_infinite());
    EXPECT_THROW(RateValue::infinity().value(), std::logic_error);
    EXPECT_THROW(RateValue::finite(std::numeric_limits<double>::infinity()), NumericFailure);
    EXPECT_THROW(RateValue::finite(std::nan("")), NumericFailure);
    EXPECT_EQ(RateValue::finite(-1e-17).value(), 0.0);
    EXPECT_NE(RateValue::finite(1e308), RateValue::infinity());
}

TEST(RateIr, Examples) {
    EXPECT_EQ(rate_I_r(std::vector<double>{2.0}).value(), 0.0);
    EXPECT_NEAR(rate_I_r(std::vector<double>{3.0}).value(), 1.42926, 1e-5);
    EXPECT_TRUE(rate_I_r(std::vector<double>{3.0, 1.5}).is_infinite());
    EXPECT_TRUE(rate_I_r(std::vector<double>{2.5, 3.0}).is_infinite());
    EXPECT_NEAR(rate_I_r(std::vector<double>{3.0, 2.5}).value(),
                rate_I1_antiderivative(3.0) + rate_I1_antiderivative(2.5), 1e-15);
}

TEST(RateIr, AntiderivativeMatchesQuadrature) {
    // Independent oracle: plain adaptive quadrature of the original integrand.
    for (double x = 2.0; x <= 10.0 + 1e-12; x += 0.125) {
        const auto q = integrate([](double z) { return 2.0 * std::sqrt(std::max(0.0, z * z / 4.0 - 1.0)); }, 2.0, x,
                                 {1e-13, 1e-14, 4000});
        EXPECT_NEAR(rate_I1_antiderivative(x), q.value, 1e-10) << x;
        EXPECT_NEAR(rate_I1_quadrature(x).value, rate_I1_antiderivative(x), 1e-10) << x;
    }
    // Closed form x sqrt(x^2-4)/2 - 2 log((x + sqrt(x^2-4))/2).
    for (double x : {2.001, 2.2, 3.0, 7.5}) {
        const double r = std::sqrt(x * x - 4.0);
        EXPECT_NEAR(rate_I1_antiderivative(x), x * r / 2.0 - 2.0 * std::log((x + r) / 2.0), 1e-12);
    }
}

TEST(RateIr, MonotoneInEachCoordinate) {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(2.0, 6.0), d(0.0, 0.5);
    for (int t = 0; t < 1000; ++t) {
        double a = u(g), b = u(g);
        if (a < b) std::swap(a, b);
        const double base = rate_I_r(std::vector<double>{a, b}).value();
        EXPECT_GE(rate_I_r(std::vector<double>{a + d(g), b}).value(), base);
        const double nb = std::min(a, b + d(g));
        EXPECT_GE(rate_I_r(std::vector<double>{a, nb}).value(), base);
    }
}

TEST(RateJ, Examples) {
    EXPECT_EQ(J(2.0), 0.0);
    EXPECT_EQ(J(3.0), 0.0);
    EXPECT_NEAR(J(0.0), 0.5 * std::log(3.0), 1e-12);
    EXPECT_LE(std::abs(J(-10.0) - (50.0 + std::log(10.0) + 0.75)), 0.02);
    EXPECT_NEAR(J(2.0 - 1e-9), 0.0, 1e-12);
}

TEST(RateJ, ExpansionRemainderBound) {
    for (double x = -50.0; x <= -3.0; x += 0.5) {
        EXPECT_LE(std::abs(J(x) - (x * x / 2.0 + std::log(-x) + 0.75)), 2.0 / (x * x)) << x;
        EXPECT_LE(std::abs(rate_J_prime(x) - (x + 1.0 / x)), 4.0 / std::abs(x * x * x)) << x;
    }
}

TEST(RateJPrime, Examples) {
    EXPECT_NEAR(rate_J_prime(2.0), 0.0, 1e-13);
    EXPECT_LE(std::abs(rate_J_prime(-10.0) - (-10.0 - 0.1)), 0.004);
    const double h = 1e-5;
    EXPECT_NEAR((J(1.0 + h) - J(1.0 - h)) / (2.0 * h), rate_J_prime(1.0), 1e-8);
    EXPECT_THROW(rate_J_prime(2.5), DomainError);
    for (double x = -20.0; x <= 2.0; x += 0.25) EXPECT_LE(rate_J_prime(x), 1e-15);
}

TEST(RateJSecond, Examples) {
    EXPECT_NEAR(rate_J_second(2.0), 0.0, 1e-13);
    EXPECT_NEAR(rate_J_second(0.0), 2.0 / 3.0, 1e-15);
    EXPECT_THROW(rate_J_second(2.1), DomainError);
    for (double x = -20.0; x < 2.0; x += 0.01) {
        const double v = rate_J_second(x);
        ASSERT_GT(v, 0.0) << x;
        ASSERT_LT(v, 1.0) << x;
    }
}

TEST(RateJ, ConvexNonincreasingAndConsistent) {
    const double h = 1e-4;
    for (double x = -8.0; x <= 1.9; x += 0.05) {
        const double fd2 = (J(x + h) - 2.0 * J(x) + J(x - h)) / (h * h);
        EXPECT_GE(fd2, -1e-8) << x;
        EXPECT_NEAR(fd2, rate_J_second(x), 1e-6 * 50) << x;
        EXPECT_LE(J(x + 0.05), J(x));
        EXPECT_NEAR((rate_J_prime(x + h) - rate_J_prime(x - h)) / (2.0 * h), rate_J_second(x), 1e-7) << x;
    }
}

TEST(RateK, Examples) {
    EXPECT_TRUE(rate_K_closed(-0.5).is_infinite());
    EXPECT_TRUE(rate_K_closed(0.0).is_infinite());
    EXPECT_EQ(rate_K_closed(2.0).value(), 0.0);
    EXPECT_EQ(rate_K_closed(2.5).value(), 0.0);
    EXPECT_NEAR(K(2.0 - 1e-6), 0.0, 1e-6);
    EXPECT_NEAR(K(1.999), 0.0, 1e-6);
}

TEST(RateK, NonincreasingAndLogBehaviourNearZero) {
    double prev = K(0.001);
    for (double x = 0.002; x < 2.0; x += 0.001) {
        const double v = K(x);
        ASSERT_LE(v, prev + 1e-12) << x;
        prev = v;
    }
    for (double x = 1e-6; x < 0.05; x *= 1.5) EXPECT_LE(std::abs(K(x) + std::log(x)), 8.0) << x;
}

TEST(KEtaAsymptotic, Examples) {
    EXPECT_NEAR(k_eta_asymptotic(-10.0, 0.0), 50.0 + std::log(10.0), 1e-12);
    EXPECT_NEAR(k_eta_asymptotic(0.01, 1.0), -std::log(0.01), 1e-12);
    EXPECT_NEAR(k_eta_asymptotic(-10.0, 0.5), 100.0 + std::log(20.0), 1e-12);
    EXPECT_THROW(k_eta_asymptotic(1.0, 0.5), DomainError);
    EXPECT_THROW(k_eta_asymptotic(1.5, 1.0), DomainError);
    EXPECT_THROW(k_eta_asymptotic(-1.0, 1.5), DomainError);
}

TEST(Quadrature, EndpointSingularities) {
    // int_0^1 log x = -1; int_0^1 x^{-1/2} = 2.
    EXPECT_NEAR(integrate([](double x) { return std::log(x); }, 0.0, 1.0).value, -1.0, 1e-9);
    const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    EXPECT_NEAR(r.value, 2.0, 1e-7);
    EXPECT_TRUE(integrate([](double x) { return std::sin(x); }, 0.0, M_PI).converged);
}
