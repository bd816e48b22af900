#include "svseries/core_math.hpp"

#include <stdexcept>
#include <string>

namespace svseries {

namespace {

void check_inputs(const BsInputs& b) {
    if (!(b.maturity > b.t)) throw std::invalid_argument("BsInputs: maturity must exceed t");
    if (!(b.sigma > 0.0)) throw std::invalid_argument("BsInputs: sigma must be positive");
    if (!(b.strike > 0.0)) throw std::invalid_argument("BsInputs: strike must be positive");
    if (!std::isfinite(b.rate) || !std::isfinite(b.x))
        throw std::invalid_argument("BsInputs: rate and x must be finite");
}

}  // namespace

double gaussian_cdf(double tau) {
    // erfc keeps full relative precision in the lower tail.
    return 0.5 * std::erfc(-tau * 0.70710678118654752440);
}

double hermite_he(int n, double tau) {
    if (n < 0) throw std::invalid_argument("hermite_he: negative order");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = tau;
    for (int k = 1; k < n; ++k) {
        const double next = tau * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double gaussian_deriv(int n, double tau) {
    if (n < 1)
        throw std::invalid_argument("gaussian_deriv: order must be >= 1, got " + std::to_string(n));
    const double sign = ((n - 1) % 2 == 0) ? 1.0 : -1.0;
    return sign * hermite_he(n - 1, tau) * gaussian_pdf(tau);
}

DValues d_values(const BsInputs& b) {
    check_inputs(b);
    const double tau = b.tau();
    const double vol_sqrt = b.sigma * std::sqrt(tau);
    const double d2 =
        (b.x - std::log(b.strike) + (b.rate - 0.5 * b.sigma * b.sigma) * tau) / vol_sqrt;
    return {d2 + vol_sqrt, d2};
}

double bs_call_price(const BsInputs& b) {
    const auto [d1, d2] = d_values(b);
    return std::exp(b.x) * gaussian_cdf(d1) -
           b.strike * std::exp(-b.rate * b.tau()) * gaussian_cdf(d2);
}

double bs_h_kernel(const BsInputs& b) {
    const auto d = d_values(b);
    const double tau = b.tau();
    return -b.strike * std::exp(-b.rate * tau) / (b.sigma * b.sigma * tau) * d.d2 *
           gaussian_pdf(d.d2);
}

double d2_from_variance(double x, double strike, double rate, double tau, double m) {
    return (x - std::log(strike) + rate * tau - 0.5 * m) / std::sqrt(m);
}

double bs_call_from_variance(double x, double strike, double rate, double tau, double m) {
    const double d2 = d2_from_variance(x, strike, rate, tau, m);
    const double d1 = d2 + std::sqrt(m);
    return std::exp(x) * gaussian_cdf(d1) - strike * std::exp(-rate * tau) * gaussian_cdf(d2);
}

}  // namespace svseries
