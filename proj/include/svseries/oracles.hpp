#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "svseries/estimators.hpp"
#include "svseries/models.hpp"

namespace svseries {

enum class BenchmarkSource { analytic_cf, highres_mc, closed_form_bs };

std::string_view benchmark_source_name(BenchmarkSource s);

struct BenchmarkPrice {
    double value = 0.0;
    double std_err = 0.0;  ///< zero for analytic prices
    BenchmarkSource source = BenchmarkSource::analytic_cf;
};

/// Semi-analytic Heston call price (t = 0) by a single Fourier integral over
/// the characteristic function of the log price, in the form that keeps the
/// complex logarithm on its principal branch. Variance v follows
/// dv = b (a - v) dt + c sqrt(v) dB1; spot s0, initial variance v0, rate r.
BenchmarkPrice heston_cf_price(const ModelParams& params, double strike, double maturity,
                               double rho);

/// Reference prices from a fine Euler run of the full correlated dynamics,
/// started at (ln s0, v0) at t = 0. All strikes share the same paths.
std::vector<BenchmarkPrice> highres_mc_prices(const ModelSpec& m, double rho,
                                              std::span<const double> strikes, double maturity,
                                              std::size_t n_paths, int n_steps,
                                              std::uint64_t seed, unsigned workers = 0);

inline constexpr std::size_t kHighresPaths = 1'000'000;
inline constexpr int kHighresSteps = 1'000;

BenchmarkPrice highres_mc_price(const ModelSpec& m, double rho, double strike, double maturity,
                                std::size_t n_paths = kHighresPaths,
                                int n_steps = kHighresSteps, std::uint64_t seed = 1,
                                unsigned workers = 0);

inline constexpr double kFdStepOrder1 = 0.05;
inline constexpr double kFdStepOrder2 = 0.1;

/// Central finite difference in rho of the MC call price (t = 0), with common
/// random numbers across rho in {-h, 0, h}; SE from per-path differences.
EstimatorResult fd_rho_derivative(int order, const ModelSpec& m, double strike, double maturity,
                                  double h, std::uint64_t seed, std::size_t n_paths,
                                  int n_steps = 500, unsigned workers = 0);

/// |estimate - truth| / truth * 100.
double percentage_error(double estimate, const BenchmarkPrice& truth);

}  // namespace svseries
