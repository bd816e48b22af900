#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "svseries/core_math.hpp"
#include "svseries/oracles.hpp"

using namespace svseries;

namespace {

ModelParams heston_params() {
    ModelParams p;
    p.a = 0.04;
    p.b = 8.0;
    p.c = 0.1;
    p.v0 = 0.0225;
    p.r = 0.0953;
    return p;
}

ModelSpec constant_model(double sigma, double r) {
    ModelParams p;
    p.v0 = sigma;
    p.r = r;
    return make_model("constant", p, 0.0, 0.0);
}

}  // namespace

TEST(HestonCf, VanishingVolOfVolIsBlackScholes) {
    ModelParams p = heston_params();
    p.c = 1e-8;
    const double T = 0.5;
    const double integrated = p.a * T + (p.v0 - p.a) * (1.0 - std::exp(-p.b * T)) / p.b;
    const double sigma = std::sqrt(integrated / T);
    for (double k : {90.0, 100.0, 110.0}) {
        for (double rho : {-0.5, 0.0, 0.5}) {
            const double bs = bs_call_price(BsInputs{0.0, std::log(p.s0), sigma, k, p.r, T});
            EXPECT_NEAR(heston_cf_price(p, k, T, rho).value, bs, 1e-6 * bs) << k << " " << rho;
        }
    }
}

TEST(HestonCf, ContinuousInCorrelation) {
    const ModelParams p = heston_params();
    for (double k : {90.0, 110.0}) {
        double prev = heston_cf_price(p, k, 0.5, -0.9).value;
        for (double rho = -0.89; rho <= 0.9; rho += 0.01) {
            const double cur = heston_cf_price(p, k, 0.5, rho).value;
            EXPECT_LT(std::abs(cur - prev), 0.01) << rho;
            prev = cur;
        }
    }
}

TEST(HestonCf, WithinArbitrageBounds) {
    ModelParams p = heston_params();
    p.a = 0.025;
    p.b = 1.62;
    p.c = 0.44;
    for (double k : {80.0, 100.0, 120.0}) {
        const double v = heston_cf_price(p, k, 0.1, -0.76).value;
        EXPECT_GE(v, std::max(p.s0 - k * std::exp(-p.r * 0.1), 0.0) - 1e-10);
        EXPECT_LE(v, p.s0);
    }
}

TEST(HestonCf, AgreesWithMonteCarlo) {
    const ModelParams p = heston_params();
    const ModelSpec m = make_model("heston", p, 0.0, 0.0);
    const std::vector<double> strikes{90.0, 100.0, 110.0};
    const auto mc = highres_mc_prices(m, -0.5, strikes, 0.5, 200'000, 500, 7, 1);
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        const double cf = heston_cf_price(p, strikes[i], 0.5, -0.5).value;
        EXPECT_NEAR(mc[i].value, cf, 3 * mc[i].std_err) << strikes[i];
    }
}

TEST(HestonCf, Errors) {
    EXPECT_THROW(heston_cf_price(heston_params(), 100.0, 0.5, 1.0), std::invalid_argument);
    EXPECT_THROW(heston_cf_price(heston_params(), -1.0, 0.5, 0.0), std::invalid_argument);
}

TEST(HighresMc, ConstantModelMatchesBlackScholes) {
    const double sigma = 0.2, r = 0.05, T = 1.0;
    const std::vector<double> strikes{90.0, 100.0, 110.0};
    const auto mc = highres_mc_prices(constant_model(sigma, r), -0.3, strikes, T, 100'000, 10, 3, 1);
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        const double bs = bs_call_price(BsInputs{0.0, std::log(100.0), sigma, strikes[i], r, T});
        EXPECT_NEAR(mc[i].value, bs, 3 * mc[i].std_err);
        EXPECT_EQ(mc[i].source, BenchmarkSource::highres_mc);
    }
}

TEST(HighresMc, StandardErrorFollowsSquareRootLaw) {
    const ModelSpec m = constant_model(0.2, 0.05);
    const double small = highres_mc_price(m, 0.0, 100.0, 1.0, 20'000, 10, 1, 1).std_err;
    const double large = highres_mc_price(m, 0.0, 100.0, 1.0, 80'000, 10, 2, 1).std_err;
    EXPECT_NEAR(small / large, 2.0, 0.2 * 2.0);
}

TEST(FdRho, ConstantModelHasNoCorrelationSensitivity) {
    const ModelSpec m = constant_model(0.2, 0.05);
    const auto d1 = fd_rho_derivative(1, m, 100.0, 1.0, kFdStepOrder1, 4, 20'000, 20, 1);
    const auto d2 = fd_rho_derivative(2, m, 100.0, 1.0, kFdStepOrder2, 4, 20'000, 20, 1);
    EXPECT_NEAR(d1.value, 0.0, 4 * d1.std_err);
    EXPECT_NEAR(d2.value, 0.0, 4 * d2.std_err);
    EXPECT_THROW(fd_rho_derivative(3, m, 100.0, 1.0, 0.05, 1, 100), std::invalid_argument);
    EXPECT_THROW(fd_rho_derivative(1, m, 100.0, 1.0, 0.2, 1, 100), std::invalid_argument);
}

TEST(PercentageError, Definition) {
    const BenchmarkPrice truth{4.0, 0.0, BenchmarkSource::analytic_cf};
    EXPECT_NEAR(percentage_error(4.1, truth), 2.5, 1e-12);
    EXPECT_NEAR(percentage_error(3.9, truth), 2.5, 1e-12);
    const BenchmarkPrice scaled{40.0, 0.0, BenchmarkSource::analytic_cf};
    EXPECT_NEAR(percentage_error(41.0, scaled), percentage_error(4.1, truth), 1e-12);
    EXPECT_THROW(percentage_error(1.0, BenchmarkPrice{0.0, 0.0, BenchmarkSource::highres_mc}),
                 std::invalid_argument);
}
