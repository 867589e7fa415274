#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "aew/interpolation.hpp"
#include "aew/quadrature.hpp"

using namespace aew;

TEST(GaussHermite, MomentsOfStandardNormal) {
    const auto& r = gauss_hermite(20);
    double m0 = 0, m2 = 0, m4 = 0, m6 = 0, m1 = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double z = r.nodes[i], w = r.weights[i];
        m0 += w, m1 += w * z, m2 += w * z * z, m4 += w * std::pow(z, 4), m6 += w * std::pow(z, 6);
    }
    EXPECT_NEAR(m0, 1.0, 1e-14);
    EXPECT_NEAR(m1, 0.0, 1e-14);
    EXPECT_NEAR(m2, 1.0, 1e-13);
    EXPECT_NEAR(m4, 3.0, 1e-12);
    EXPECT_NEAR(m6, 15.0, 1e-11);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    const auto& r = gauss_legendre(6);
    double s = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 10);
    EXPECT_NEAR(s, 2.0 / 11.0, 1e-15);
}

TEST(GaussianExpectation, CallWithBreakpointIsBachelier) {
    const double k = 100.0;
    const double bp[] = {k};
    const double v = gaussian_expectation([&](double y) { return std::max(y - k, 0.0); }, 100.0, 40.0, bp, 64);
    EXPECT_NEAR(v, 40.0 / std::sqrt(2.0 * M_PI), 1e-12);
}

TEST(GaussianExpectation, ZeroSdReturnsPointValue) {
    EXPECT_EQ(gaussian_expectation([](double y) { return y * y; }, 3.0, 0.0, {}, 16), 9.0);
}

TEST(MonotoneCubic, ReproducesNodesAndLines) {
    std::vector<double> v;
    for (int i = 0; i <= 10; ++i) v.push_back(2.0 * i + 1.0);
    MonotoneCubic f(0.0, 10.0, v);
    for (int i = 0; i <= 10; ++i) EXPECT_DOUBLE_EQ(f(i), 2.0 * i + 1.0);
    EXPECT_NEAR(f(3.3), 7.6, 1e-13);
    EXPECT_NEAR(f(-2.0), -3.0, 1e-13);  // linear extension
    EXPECT_NEAR(f(12.0), 25.0, 1e-13);
}

TEST(MonotoneCubic, PreservesMonotoneData) {
    std::vector<double> v;
    for (int i = 0; i <= 40; ++i) v.push_back(std::max(i - 20.0, 0.0));  // call payoff
    MonotoneCubic f(0.0, 40.0, v);
    double prev = f(0.0);
    for (int i = 1; i <= 4000; ++i) {
        const double x = i * 0.01;
        EXPECT_GE(f(x), prev - 1e-15) << x;
        prev = f(x);
    }
    EXPECT_EQ(f(10.5), 0.0);
}

TEST(MonotoneCubic, FourthOrderOnSmoothData) {
    auto err = [](int n) {
        std::vector<double> v;
        for (int i = 0; i <= n; ++i) v.push_back(std::sin(static_cast<double>(i) / n));
        MonotoneCubic f(0.0, 1.0, v);
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            const double x = 0.2 + 0.6 * i / 1000.0;
            worst = std::max(worst, std::abs(f(x) - std::sin(x)));
        }
        return worst;
    };
    EXPECT_GT(err(40) / err(80), 10.0);
}
