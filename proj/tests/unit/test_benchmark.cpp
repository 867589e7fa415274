#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "aew/benchmark.hpp"
#include "aew/gaussian_proxy.hpp"
#include "aew/pricer.hpp"
#include "test_support.hpp"

using namespace aew;
using aew::testing::std_local_vol;
using aew::testing::std_sabr;
using aew::testing::vec;
using aew::testing::z_score;

namespace {

std::vector<PayoffSpec> exp_calls(std::initializer_list<double> strikes) {
    std::vector<PayoffSpec> out;
    for (double k : strikes) out.push_back(PayoffSpec::call(k, UnderlyingMap::ExpOfFirstCoordinate));
    return out;
}

} // namespace

// 2 * 10^5 paths here; the SE is tight enough for the 3 SE check against the
// Black-Scholes value 15.8519.
TEST(Euler, LogNormalLocalVolIsBlackScholes) {
    LocalVolCev m(100, 1.0, 0.4);
    const std::vector<PayoffSpec> p = {PayoffSpec::call(100)};
    const auto est = em_price(m, p, 1.0, 500, 200'000, 99)[0];
    EXPECT_LT(z_score(est.value, 15.8519, est.std_err), 3.0);
    EXPECT_EQ(est.paths, 200'000u);
    EXPECT_EQ(est.seed, 99u);
}

TEST(Euler, ZeroVolatilityReturnsPayoffAtSpot) {
    LocalVolCev m(100, 0.5, 1e-12);
    const std::vector<PayoffSpec> p = {PayoffSpec::call(90), PayoffSpec::put(90)};
    const auto est = em_price(m, p, 1.0, 10, 1000, 1);
    EXPECT_NEAR(est[0].value, 10.0, 1e-8);
    EXPECT_NEAR(est[1].value, 0.0, 1e-12);
}

TEST(Euler, SabrWithVanishingVolOfVolIsBlackScholes) {
    LogNormalSabr s(100, 0.3, 1e-8, -0.5);
    const auto p = exp_calls({90, 100, 115});
    const auto est = em_price(s, p, 1.0, 100, 100'000, 12);
    for (std::size_t i = 0; i < p.size(); ++i)
        EXPECT_LT(z_score(est[i].value, black_call(100, p[i].strike, 0.3), est[i].std_err), 3.0) << i;
}

TEST(Euler, ControlVariateIsUnbiased) {
    const auto m = std_local_vol();
    const std::vector<PayoffSpec> p = {PayoffSpec::put(60), PayoffSpec::call(100), PayoffSpec::call(180)};
    EmOptions cv;
    cv.control_variate = true;
    const auto plain = em_price(m, p, 1.0, 100, 100'000, 3);
    const auto reduced = em_price(m, p, 1.0, 100, 100'000, 4, 0, Exec::Parallel, cv);
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_LT(z_score(plain[i].value, reduced[i].value, combined_std_err(plain[i], reduced[i])), 3.0) << i;
        EXPECT_LT(reduced[i].std_err, plain[i].std_err) << i;
        EXPECT_EQ(reduced[i].method.mode, "mc-cv");
    }
    const auto s = std_sabr();
    const auto sp = exp_calls({100, 120});
    const auto sa = em_price(s, sp, 1.0, 50, 50'000, 5);
    const auto sb = em_price(s, sp, 1.0, 50, 50'000, 6, 0, Exec::Parallel, cv);
    for (std::size_t i = 0; i < sp.size(); ++i)
        EXPECT_LT(z_score(sa[i].value, sb[i].value, combined_std_err(sa[i], sb[i])), 3.0) << i;
}

TEST(Euler, GenericFieldSetMatchesLocalVolKernel) {
    const auto m = std_local_vol();
    const std::vector<PayoffSpec> p = {PayoffSpec::call(120)};
    const auto a = em_price(m.field_set(), vec({100}), p, 1.0, 100, 100'000, 7)[0];
    const auto b = em_price(m, p, 1.0, 100, 100'000, 8)[0];
    EXPECT_LT(z_score(a.value, b.value, combined_std_err(a, b)), 3.0);
}

TEST(Euler, DoublingStepsWithinNoise) {
    const auto m = std_local_vol();
    const std::vector<PayoffSpec> p = {PayoffSpec::call(100), PayoffSpec::call(160)};
    const auto a = em_price(m, p, 1.0, 100, 200'000, 21);
    const auto b = em_price(m, p, 1.0, 200, 200'000, 22);
    for (std::size_t i = 0; i < p.size(); ++i)
        EXPECT_LT(z_score(a[i].value, b[i].value, combined_std_err(a[i], b[i])), 3.0) << i;
}

TEST(Euler, StandardErrorScalesWithPaths) {
    const auto m = std_local_vol();
    const std::vector<PayoffSpec> p = {PayoffSpec::call(100)};
    const auto a = em_price(m, p, 1.0, 50, 10'000, 1)[0];
    const auto b = em_price(m, p, 1.0, 50, 100'000, 1)[0];
    EXPECT_NEAR(a.std_err / b.std_err, std::sqrt(10.0), 0.2 * std::sqrt(10.0));
}

// First moment of the weighted proxy density equals the spot; the simulated
// mean of S_t must agree.
TEST(Euler, MeanMatchesWeightedProxyMean) {
    const auto m = std_local_vol();
    const std::vector<PayoffSpec> p = {PayoffSpec::identity()};
    const auto est = em_price(m, p, 1.0, 100, 200'000, 2)[0];
    const auto law = proxy_law(m.field_set(), vec({100}), 1.0, m.epsilon());
    const double weighted = q_step_1d(law, WeightFunction::local_vol(m, 1), PayoffSpec::identity());
    EXPECT_LT(z_score(est.value, weighted, est.std_err), 3.0);
}

TEST(Euler, ThreadCountDoesNotChangeResults) {
    const auto m = std_local_vol();
    const std::vector<PayoffSpec> p = {PayoffSpec::put(70), PayoffSpec::call(130)};
    std::vector<PriceEstimate> ref;
    {
        ScopedWorkerThreads one(1);
        ref = em_price(m, p, 1.0, 20, 10'000, 3);
    }
    for (int threads : {4, 16}) {
        ScopedWorkerThreads scoped(threads);
        const auto other = em_price(m, p, 1.0, 20, 10'000, 3);
        for (std::size_t i = 0; i < p.size(); ++i) {
            EXPECT_EQ(other[i].value, ref[i].value);
            EXPECT_EQ(other[i].std_err, ref[i].std_err);
        }
    }
    const auto serial = em_price(m, p, 1.0, 20, 10'000, 3, 0, Exec::Serial);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(serial[i].value, ref[i].value, 1e-12 * ref[i].value);
}

TEST(Euler, ExplosionNamesThePath) {
    VectorFieldSet f;
    f.state_dim = 1;
    f.noise_dim = 1;
    f.epsilon = 1.0;
    f.initial_state = vec({1.0});
    f.drift = [](double, const Vec& x) { return Vec(x.array().square().matrix() * 1e3); };
    f.drift_eps_deriv_at_zero = [](const Vec&) { return vec({0.0}); };
    f.drift_jacobian_at_zero = [](const Vec& x) { return Mat::Constant(1, 1, 2e3 * x(0)); };
    f.diffusion = {[](const Vec&) { return vec({1.0}); }};
    f.diffusion_jacobian = {[](const Vec&) { return Mat::Zero(1, 1); }};
    const std::vector<PayoffSpec> p = {PayoffSpec::identity()};
    try {
        em_price(f, vec({1.0}), p, 1.0, 10, 1000, 1);
        FAIL() << "expected an explosion";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("path"), std::string::npos);
    }
}

TEST(Euler, RejectsBadInput) {
    const auto m = std_local_vol();
    const std::vector<PayoffSpec> p = {PayoffSpec::call(100)};
    EXPECT_THROW(em_price(m, p, 1.0, 10, 999, 1), std::invalid_argument);
    EXPECT_THROW(em_price(m, p, 1.0, 0, 1000, 1), std::invalid_argument);
    EXPECT_THROW(em_price(m, p, 0.0, 10, 1000, 1), std::invalid_argument);
}
