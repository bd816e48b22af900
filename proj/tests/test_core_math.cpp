#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "svseries/core_math.hpp"

using namespace svseries;

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

BsInputs atm_half_year() {
    return BsInputs{0.0, std::log(100.0), 0.2, 100.0, 0.0953, 0.5};
}

}  // namespace

TEST(GaussianCdf, SymmetryAndKnownValues) {
    EXPECT_DOUBLE_EQ(gaussian_cdf(0.0), 0.5);
    // mpmath quadrature of the density, 20 digits
    EXPECT_NEAR(gaussian_cdf(1.0), 0.84134474606854294859, 1e-12 * 0.8413447460685429);
    EXPECT_NEAR(gaussian_cdf(8.0) + gaussian_cdf(-8.0), 1.0, 1e-15);
    for (double tau = -8.0; tau <= 8.0; tau += 0.25)
        EXPECT_NEAR(gaussian_cdf(tau) + gaussian_cdf(-tau), 1.0, 1e-14) << tau;
}

TEST(GaussianCdf, MonotoneAndBounded) {
    double prev = 0.0;
    for (double tau = -8.0; tau <= 8.0; tau += 0.01) {
        const double p = gaussian_cdf(tau);
        EXPECT_GE(p, prev);
        EXPECT_LE(p, 1.0);
        prev = p;
    }
}

TEST(GaussianDeriv, LowOrdersAtOrigin) {
    EXPECT_DOUBLE_EQ(gaussian_deriv(1, 0.0), kInvSqrt2Pi);
    EXPECT_DOUBLE_EQ(gaussian_deriv(2, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(gaussian_deriv(3, 0.0), -kInvSqrt2Pi);
}

TEST(GaussianDeriv, RejectsOrderZero) {
    EXPECT_THROW(gaussian_deriv(0, 1.0), std::invalid_argument);
}

TEST(GaussianDeriv, MatchesFiniteDifferenceOfPreviousOrder) {
    const double h = 1e-5;
    for (int n = 1; n <= 8; ++n) {
        for (int tau = -3; tau <= 3; ++tau) {
            const double fd = (gaussian_deriv(n, tau + h) - gaussian_deriv(n, tau - h)) / (2 * h);
            const double exact = gaussian_deriv(n + 1, tau);
            // He_n has roots at some integers (e.g. He_2(1) = 0), so the
            // relative criterion is floored.
            EXPECT_NEAR(fd, exact, 1e-6 * std::max(std::abs(exact), 1e-3)) << n << " " << tau;
        }
    }
}

TEST(GaussianDeriv, FirstDerivativeOfCdfIsDensity) {
    const double h = 1e-5;
    for (double tau : {-2.5, -0.3, 0.7, 3.1}) {
        const double fd = (gaussian_cdf(tau + h) - gaussian_cdf(tau - h)) / (2 * h);
        EXPECT_NEAR(fd, gaussian_deriv(1, tau), 1e-9);
    }
}

TEST(DValues, ZeroNumerator) {
    const double k = 100.0, r = 0.05, sigma = 0.3, tau = 0.75;
    const BsInputs b{0.0, std::log(k) - (r - 0.5 * sigma * sigma) * tau, sigma, k, r, tau};
    const auto d = d_values(b);
    EXPECT_NEAR(d.d2, 0.0, 1e-15);
    EXPECT_NEAR(d.d1, sigma * std::sqrt(tau), 1e-15);
}

TEST(DValues, RateCancelsHalfVariance) {
    const BsInputs b{0.0, std::log(100.0), 0.2, 100.0, 0.02, 1.0};
    const auto d = d_values(b);
    EXPECT_NEAR(d.d2, 0.0, 1e-15);
    EXPECT_NEAR(d.d1, 0.2, 1e-15);
}

TEST(DValues, ExtendedPrecisionReference) {
    const auto d = d_values(atm_half_year());
    EXPECT_NEAR(d.d2, 0.26622570311673514294, 1e-14);
    EXPECT_NEAR(d.d1, 0.40764705935404464782, 1e-14);
}

TEST(DValues, RejectsBadInputs) {
    BsInputs b = atm_half_year();
    b.maturity = 0.0;
    EXPECT_THROW(d_values(b), std::invalid_argument);
    b = atm_half_year();
    b.sigma = 0.0;
    EXPECT_THROW(d_values(b), std::invalid_argument);
    b = atm_half_year();
    b.strike = -1.0;
    EXPECT_THROW(bs_call_price(b), std::invalid_argument);
}

TEST(BsCallPrice, AtZeroD2) {
    const double k = 100.0, r = 0.05, sigma = 0.3, tau = 0.75;
    const BsInputs b{0.0, std::log(k) - (r - 0.5 * sigma * sigma) * tau, sigma, k, r, tau};
    const double expected =
        std::exp(b.x) * gaussian_cdf(sigma * std::sqrt(tau)) - k * std::exp(-r * tau) / 2.0;
    EXPECT_NEAR(bs_call_price(b), expected, 1e-12);
}

TEST(BsCallPrice, ZeroVolatilityLimitDeepInTheMoney) {
    const double k = 100.0, r = 0.05, tau = 0.5;
    const BsInputs b{0.0, std::log(2.0 * k) + r * tau, 1e-10, k, r, tau};
    EXPECT_NEAR(bs_call_price(b), std::exp(b.x) - k * std::exp(-r * tau), 1e-9);
}

TEST(BsCallPrice, LognormalQuadratureReference) {
    // discounted lognormal payoff integral evaluated with mpmath
    EXPECT_NEAR(bs_call_price(atm_half_year()), 8.1416965629092701417, 1e-10);
}

TEST(BsCallPrice, BoundsAndMonotonicity) {
    for (double k : {80.0, 100.0, 125.0}) {
        double prev_sigma = 0.0;
        for (double sigma = 0.05; sigma <= 1.0; sigma += 0.05) {
            const BsInputs b{0.0, std::log(100.0), sigma, k, 0.03, 0.7};
            const double p = bs_call_price(b);
            const double intrinsic = std::max(100.0 - k * std::exp(-0.03 * 0.7), 0.0);
            EXPECT_GE(p, intrinsic - 1e-12);
            EXPECT_LE(p, 100.0);
            EXPECT_GE(p, prev_sigma);
            prev_sigma = p;
        }
        double prev_x = 0.0;
        for (double s = 50.0; s <= 150.0; s += 5.0) {
            const double p = bs_call_price(BsInputs{0.0, std::log(s), 0.25, k, 0.03, 0.7});
            EXPECT_GE(p, prev_x);
            prev_x = p;
        }
    }
}

TEST(BsHKernel, VanishesAtZeroD2) {
    const double k = 100.0, r = 0.05, sigma = 0.3, tau = 0.75;
    const BsInputs b{0.0, std::log(k) - (r - 0.5 * sigma * sigma) * tau, sigma, k, r, tau};
    EXPECT_NEAR(bs_h_kernel(b), 0.0, 1e-12);
}

TEST(BsHKernel, NegativeWhenD2Positive) {
    const BsInputs b = atm_half_year();
    ASSERT_GT(d_values(b).d2, 0.0);
    EXPECT_LT(bs_h_kernel(b), 0.0);
}

TEST(BsHKernel, MatchesFiniteDifferencesOfDelta) {
    // H = d3C/dx3 - d2C/dx2 = d2Delta/dx2 - dDelta/dx with Delta = e^x N(d1)
    const double h = 2e-4;
    for (double sigma : {0.15, 0.3}) {
        for (double spot : {85.0, 97.0, 104.0, 120.0}) {
            for (double tau : {0.25, 1.0}) {
                const BsInputs b{0.0, std::log(spot), sigma, 100.0, 0.04, tau};
                auto delta = [&](double dx) {
                    BsInputs s = b;
                    s.x += dx;
                    return std::exp(s.x) * gaussian_cdf(d_values(s).d1);
                };
                const double dm = delta(-h), d0 = delta(0.0), dp = delta(h);
                const double fd = (dp - 2 * d0 + dm) / (h * h) - (dp - dm) / (2 * h);
                const double exact = bs_h_kernel(b);
                EXPECT_NEAR(fd, exact, 1e-5 * std::abs(exact)) << sigma << " " << spot << " " << tau;
            }
        }
    }
}

TEST(VarianceHelpers, AgreeWithSigmaForm) {
    const BsInputs b = atm_half_year();
    const double m = b.sigma * b.sigma * b.tau();
    EXPECT_NEAR(d2_from_variance(b.x, b.strike, b.rate, b.tau(), m), d_values(b).d2, 1e-14);
    EXPECT_NEAR(bs_call_from_variance(b.x, b.strike, b.rate, b.tau(), m), bs_call_price(b), 1e-12);
}
