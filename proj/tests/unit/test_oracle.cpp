#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "aew/gaussian_proxy.hpp"
#include "aew/pricer.hpp"
#include "aew/weight_oracle.hpp"
#include "test_support.hpp"

using namespace aew;
using aew::testing::std_local_vol;
using aew::testing::std_sabr;
using aew::testing::vec;
using aew::testing::z_score;

// Reduced path counts; the full 10^6-path comparison is acceptance criterion 3.

TEST(Oracle, OrderZeroIsBachelier) {
    auto est = weight_oracle_mc(std_local_vol(), 0, 1.0, 100.0, PayoffSpec::call(100), 200'000, 17);
    EXPECT_LT(z_score(est.value, bachelier_call(100, 100, 40), est.std_err), 3.0);
}

TEST(Oracle, IdentityFirstOrderIsProxyMean) {
    auto est = weight_oracle_mc(std_local_vol(), 1, 1.0, 100.0, PayoffSpec::identity(), 100'000, 3, 256);
    EXPECT_LT(z_score(est.value, 100.0, est.std_err), 3.0);
}

TEST(Oracle, LocalVolClosedFormsAgree) {
    const auto m = std_local_vol();
    const std::vector<PayoffSpec> payoffs = {PayoffSpec::put(60), PayoffSpec::call(100), PayoffSpec::call(140)};
    auto table = weight_oracle_mc(m, 2, 1.0, 100.0, payoffs, 100'000, 5);
    const ProxyLaw law = proxy_law(m.field_set(), vec({100}), 1.0, m.epsilon());
    for (int order : {1, 2}) {
        for (std::size_t p = 0; p < payoffs.size(); ++p) {
            const double closed = q_step_1d(law, WeightFunction::local_vol(m, order), payoffs[p]);
            const auto& o = table.at(order, p);
            EXPECT_LT(z_score(closed, o.total.value, o.total.std_err), 3.0) << "m=" << order << " p=" << p;
            // The correction carries most of the signal and a much tighter error bar.
            const double base = q_step_1d(law, WeightFunction::unit(), payoffs[p]);
            EXPECT_LT(z_score(closed - base, o.correction.value, o.correction.std_err), 3.0)
                << "m=" << order << " p=" << p;
        }
    }
}

TEST(Oracle, SabrFirstOrderAgrees) {
    const auto s = std_sabr();
    const double x[] = {s.x0(), s.sigma0()};
    const std::vector<PayoffSpec> payoffs = {PayoffSpec::call(100, UnderlyingMap::ExpOfFirstCoordinate),
                                             PayoffSpec::put(80, UnderlyingMap::ExpOfFirstCoordinate)};
    auto table = weight_oracle_mc(s, 1.0, x, payoffs, 50'000, 8, 512);
    for (std::size_t p = 0; p < payoffs.size(); ++p) {
        const auto closed = q_step_sabr(s, x, 1.0, payoffs[p], 1, SabrStepMode::MarginalQuadrature);
        const auto& o = table.at(1, p);
        EXPECT_LT(z_score(closed.value, o.total.value, o.total.std_err), 3.0) << p;
    }
}

TEST(Oracle, DeterministicAcrossModes) {
    const auto m = std_local_vol();
    auto a = weight_oracle_mc(m, 2, 0.5, 100.0, PayoffSpec::call(120), 3000, 1, 64, Exec::Parallel);
    auto b = weight_oracle_mc(m, 2, 0.5, 100.0, PayoffSpec::call(120), 3000, 1, 64, Exec::Parallel);
    auto c = weight_oracle_mc(m, 2, 0.5, 100.0, PayoffSpec::call(120), 3000, 1, 64, Exec::Serial);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_err, b.std_err);
    EXPECT_NEAR(a.value, c.value, 1e-12 * std::abs(a.value));
}
