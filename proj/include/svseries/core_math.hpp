#pragma once

#include <cmath>

namespace svseries {

/// Inputs of the Black-Scholes call formula in log-spot coordinates.
struct BsInputs {
    double t = 0.0;         ///< valuation time (years)
    double x = 0.0;         ///< log spot
    double sigma = 0.0;     ///< volatility
    double strike = 0.0;
    double rate = 0.0;
    double maturity = 0.0;  ///< T, must exceed t

    double tau() const { return maturity - t; }
};

struct DValues {
    double d1;
    double d2;
};

/// Standard normal cdf.
double gaussian_cdf(double tau);

/// Standard normal density.
inline double gaussian_pdf(double tau) {
    constexpr double kInvSqrt2Pi = 0.39894228040143267794;
    return kInvSqrt2Pi * std::exp(-0.5 * tau * tau);
}

/// Probabilists' Hermite polynomial He_n(tau).
double hermite_he(int n, double tau);

/// n-th derivative of the Gaussian cdf, n >= 1:
/// N^{(n)}(tau) = (-1)^{n-1} He_{n-1}(tau) N'(tau).
double gaussian_deriv(int n, double tau);

DValues d_values(const BsInputs& b);

double bs_call_price(const BsInputs& b);

/// (d^3/dx^3 - d^2/dx^2) of the call price, in closed form
/// -K e^{-r(T-t)} d2 N'(d2) / (sigma^2 (T-t)).
double bs_h_kernel(const BsInputs& b);

// Helpers parameterised by integrated variance m = sigma^2 (T-t) instead of
// sigma. The estimators evaluate these per path at m = <M>_{[t,T]}.

/// d2 at sigma = sqrt(m/(T-t)).
double d2_from_variance(double x, double strike, double rate, double tau, double m);

/// Call price at sigma = sqrt(m/(T-t)).
double bs_call_from_variance(double x, double strike, double rate, double tau, double m);

}  // namespace svseries
