#include "svseries/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "svseries/path_engine.hpp"

namespace svseries {

namespace {

using cplx = std::complex<double>;

// log(1 + z) without losing digits for small |z|.
cplx log1p_complex(cplx z) {
    const cplx u = 1.0 + z;
    if (u == 1.0) return z;
    return std::log(u) * z / (u - 1.0);
}

// E[exp(i w X)] for X = ln(S_T / S_0) - rT under Heston, principal-branch form.
// xi - d is formed as -sigma^2 (w^2 + i w) / (xi + d) so that small sigma does
// not cancel before the division by sigma^2.
cplx heston_cf(cplx w, const ModelParams& p, double maturity, double rho) {
    const cplx i(0.0, 1.0);
    const double kappa = p.b;
    const double theta = p.a;
    const double sigma = p.c;
    const cplx xi = kappa - sigma * rho * i * w;
    const cplx d = std::sqrt(xi * xi + sigma * sigma * (w * w + i * w));
    const cplx q_over_s2 = -(w * w + i * w) / (xi + d);  // (xi - d) / sigma^2
    const cplx g = sigma * sigma * q_over_s2 / (xi + d);
    const cplx e = std::exp(-d * maturity);
    const cplx log_term = log1p_complex(g * (1.0 - e) / (1.0 - g));
    const cplx big_c =
        kappa * theta * (q_over_s2 * maturity - 2.0 * log_term / (sigma * sigma));
    const cplx big_d = q_over_s2 * (1.0 - e) / (1.0 - g * e);
    return std::exp(big_c + big_d * p.v0);
}

}  // namespace

std::string_view benchmark_source_name(BenchmarkSource s) {
    switch (s) {
        case BenchmarkSource::analytic_cf: return "analytic_cf";
        case BenchmarkSource::highres_mc: return "highres_mc";
        case BenchmarkSource::closed_form_bs: return "closed_form_bs";
    }
    return "unknown";
}

BenchmarkPrice heston_cf_price(const ModelParams& params, double strike, double maturity,
                               double rho) {
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("heston_cf_price: |rho| must be < 1");
    if (!(maturity > 0.0) || !(strike > 0.0) || !(params.s0 > 0.0))
        throw std::invalid_argument("heston_cf_price: maturity, strike and s0 must be positive");
    if (!(params.c > 0.0) || !(params.b > 0.0) || !(params.v0 >= 0.0))
        throw std::invalid_argument("heston_cf_price: invalid Heston parameters");

    // Lewis form: C = S0 - sqrt(S0 K) e^{-rT/2} / pi * int_0^inf Re[e^{iuk} phi(u - i/2)] / (u^2 + 1/4) du
    const double s0 = params.s0;
    const double log_moneyness = std::log(s0 / strike) + params.r * maturity;
    auto integrand = [&](double u) {
        const cplx w(u, -0.5);
        const cplx val = std::exp(cplx(0.0, u * log_moneyness)) * heston_cf(w, params, maturity, rho);
        return val.real() / (u * u + 0.25);
    };
    double err = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-13, &err);
    const double prefactor = std::sqrt(s0 * strike) * std::exp(-0.5 * params.r * maturity) /
                             std::numbers::pi;
    if (!std::isfinite(integral) || prefactor * err > 1e-8)
        throw std::runtime_error("heston_cf_price: quadrature did not converge (error estimate " +
                                 std::to_string(prefactor * err) + ")");
    return {s0 - prefactor * integral, 0.0, BenchmarkSource::analytic_cf};
}

std::vector<BenchmarkPrice> highres_mc_prices(const ModelSpec& m, double rho,
                                              std::span<const double> strikes, double maturity,
                                              std::size_t n_paths, int n_steps,
                                              std::uint64_t seed, unsigned workers) {
    if (n_paths < 2) throw std::invalid_argument("highres_mc_prices: need at least two paths");
    const TimeGrid grid{0.0, maturity, n_steps};
    grid.validate();
    const double x0 = std::log(m.params().s0);
    const double v0 = m.params().v0;
    const double rhos[] = {rho};

    std::vector<double> terminal(n_paths);
    parallel_for(n_paths, workers, [&](std::size_t i) {
        simulate_terminal_log_prices(m, grid, x0, v0, rhos, RngStream{seed, i},
                                     std::span<double>(&terminal[i], 1));
    });
    const auto n_invalid = static_cast<std::size_t>(
        std::count_if(terminal.begin(), terminal.end(), [](double q) { return !std::isfinite(q); }));
    if (static_cast<double>(n_invalid) > kMaxInvalidFraction * static_cast<double>(n_paths))
        throw std::runtime_error("highres_mc_prices: too many invalid paths");

    const double disc = std::exp(-m.params().r * maturity);
    std::vector<BenchmarkPrice> out;
    std::vector<double> payoff;
    payoff.reserve(n_paths);
    for (double k : strikes) {
        payoff.clear();
        for (double xi : terminal)
            if (std::isfinite(xi)) payoff.push_back(disc * std::max(std::exp(xi) - k, 0.0));
        const EstimatorResult r = summarize(payoff, seed);
        out.push_back({r.value, r.std_err, BenchmarkSource::highres_mc});
    }
    return out;
}

BenchmarkPrice highres_mc_price(const ModelSpec& m, double rho, double strike, double maturity,
                                std::size_t n_paths, int n_steps, std::uint64_t seed,
                                unsigned workers) {
    const double strikes[] = {strike};
    return highres_mc_prices(m, rho, strikes, maturity, n_paths, n_steps, seed, workers).front();
}

EstimatorResult fd_rho_derivative(int order, const ModelSpec& m, double strike, double maturity,
                                  double h, std::uint64_t seed, std::size_t n_paths, int n_steps,
                                  unsigned workers) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("fd_rho_derivative: order must be 1 or 2");
    if (!(h > 0.0 && h <= 0.1)) throw std::invalid_argument("fd_rho_derivative: h must be in (0, 0.1]");
    const TimeGrid grid{0.0, maturity, n_steps};
    grid.validate();
    const double x0 = std::log(m.params().s0);
    const double v0 = m.params().v0;
    const double disc = std::exp(-m.params().r * maturity);
    const double rhos[] = {-h, 0.0, h};

    std::vector<double> diff(n_paths);
    parallel_for(n_paths, workers, [&](std::size_t i) {
        double xi[3];
        simulate_terminal_log_prices(m, grid, x0, v0, rhos, RngStream{seed, i}, xi);
        double pay[3];
        for (int j = 0; j < 3; ++j) pay[j] = disc * std::max(std::exp(xi[j]) - strike, 0.0);
        diff[i] = order == 1 ? (pay[2] - pay[0]) / (2.0 * h)
                             : (pay[2] - 2.0 * pay[1] + pay[0]) / (h * h);
    });
    std::erase_if(diff, [](double q) { return !std::isfinite(q); });
    if (static_cast<double>(n_paths - diff.size()) >
        kMaxInvalidFraction * static_cast<double>(n_paths))
        throw std::runtime_error("fd_rho_derivative: too many invalid paths");
    return summarize(diff, seed);
}

double percentage_error(double estimate, const BenchmarkPrice& truth) {
    if (!(truth.value > 0.0))
        throw std::invalid_argument("percentage_error: benchmark must be positive");
    return std::abs(estimate - truth.value) / truth.value * 100.0;
}

}  // namespace svseries
