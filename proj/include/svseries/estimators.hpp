#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "svseries/path_engine.hpp"

namespace svseries {

/// Uniform Monte Carlo output.
struct EstimatorResult {
    double value = 0.0;
    double std_err = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Sample mean and standard error, pairwise summation in index order.
EstimatorResult summarize(std::span<const double> samples, std::uint64_t seed);

/// Contract being priced: a call with strike K at maturity T, valued at
/// time t with log spot x.
struct OptionSetup {
    double strike = 100.0;
    double rate = 0.0;
    double t = 0.0;
    double maturity = 1.0;
    double x = 0.0;

    double tau() const { return maturity - t; }
    double discount() const;
};

// Expansion A: order 0 and 1 coincide with the Antonelli-Scarlatti
// coefficients, order 2 uses the l functional.

EstimatorResult estimate_g0(const PathBatch& batch, const OptionSetup& opt);
EstimatorResult estimate_g1(const PathBatch& batch, const OptionSetup& opt);
/// Native second derivative u2; the series uses u2 / 2.
EstimatorResult estimate_u2_expA(const PathBatch& batch, const OptionSetup& opt);

/// Largest k accepted by compute_xi_k.
inline constexpr int kMaxXiOrder = 8;

/// Xi_k(s) at grid node `s_index`: k-th rho-derivative at 0 of
/// N''(D(s; rho)) / (1 - rho^2 <M>_{[t,s]} / <M>_{[t,T]}). Needs grids.
double compute_xi_k(int k, const PathFunctionals& p, std::size_t s_index,
                    const OptionSetup& opt);

/// u_n = n K e^{-r(T-t)} E[<M>^{-1} int Xi_{n-1}(s) psi_s ds], 1 <= n <= 9.
EstimatorResult estimate_un_general(int n, const PathBatch& batch, const OptionSetup& opt);

/// Closed-form first-order approximation with <M> and c replaced by their
/// batch means.
struct AsClosedForm {
    double g0_bar;
    double g1_bar;
};
AsClosedForm estimate_as_closed_form(const PathBatch& batch, const OptionSetup& opt);

struct MalliavinWeights {
    double lam1;
    double lam2;
};

/// Weights for the first and second rho-derivatives at rho = 0:
///   lam1 = U Z / tau
///   lam2 = U^2 / tau^2 (Z^2 - int f^{-2}) - V Z / tau + 1
MalliavinWeights malliavin_weights(const PathFunctionals& p, double tau);

/// C^2 call localizer: Phi'' is the bump
/// B(z) = 3/(4 delta) - 3 (z - K)^2 / (4 delta^3) on [K - delta, K + delta],
/// so Phi = 0 below the band and Phi(y) = y - K above it.
class Localizer {
public:
    Localizer(double strike, double delta);

    /// delta <= 0 switches localization off.
    bool enabled() const { return delta_ > 0.0; }
    double strike() const { return strike_; }
    double delta() const { return delta_; }

    double phi(double y) const;
    double dphi(double y) const;
    double d2phi(double y) const;

private:
    double strike_;
    double delta_;
};

/// Default localizer half-width as a fraction of the strike.
inline constexpr double kDefaultDeltaFactor = 0.01;

using Payoff = std::function<double(double)>;

Payoff call_payoff(double strike);

/// d^k/drho^k E[e^{-r(T-t)} h(S_T)] at rho = 0 via Malliavin weights, k in {1, 2}.
/// With a localizer, (h - Phi) carries the weight and Phi is differentiated
/// pathwise using dS/drho = S U and d^2S/drho^2 = S (U^2 - V).
EstimatorResult estimate_expM(int order, const PathBatch& batch, const Payoff& payoff,
                              const std::optional<Localizer>& loc, const OptionSetup& opt);

/// Coefficient set estimated on one shared batch. Native derivatives u_k are
/// stored; series assembly divides by k!.
struct ExpansionCoefficients {
    EstimatorResult g0;
    EstimatorResult g1;
    EstimatorResult u2;
    EstimatorResult lam1;  ///< ExpM first derivative
    EstimatorResult lam2;  ///< ExpM second derivative
    double g0_bar = 0.0;
    double g1_bar = 0.0;
    bool localized = false;
};

ExpansionCoefficients estimate_coefficients(const PathBatch& batch, const OptionSetup& opt,
                                            double delta_factor = kDefaultDeltaFactor);

enum class SeriesMethod { expA, expM, as_closed };

std::string_view series_method_name(SeriesMethod m);

struct SeriesPrice {
    double value = 0.0;
    /// Coefficient errors combined in quadrature. The coefficients share
    /// paths, so this ignores their covariance.
    double std_err = 0.0;
    bool correlated_err = true;
    bool large_rho_warning = false;
};

/// Threshold above which |rho| triggers a warning; the radius of convergence
/// of the series is not known.
inline constexpr double kRhoWarnThreshold = 0.8;

SeriesPrice series_price(const ExpansionCoefficients& coeffs, double rho, int order,
                         SeriesMethod method);

}  // namespace svseries
