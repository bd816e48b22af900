#include "svseries/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "svseries/core_math.hpp"

namespace svseries {

namespace {

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 16) {
        double s = 0.0;
        for (double q : xs) s += q;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

void require_nonempty(const PathBatch& batch) {
    if (batch.n_valid() == 0) throw std::invalid_argument("estimator: batch has no valid paths");
}

// Evaluates fn on every valid path, in path order.
template <typename Fn>
EstimatorResult over_paths(const PathBatch& batch, Fn&& fn) {
    require_nonempty(batch);
    std::vector<double> samples;
    samples.reserve(batch.n_valid());
    for (const auto& p : batch.paths)
        if (p.valid) samples.push_back(fn(p));
    return summarize(samples, batch.seed);
}

void require_grids(const PathFunctionals& p) {
    if (p.psi.empty() || p.m_running.size() != p.psi.size() + 1)
        throw std::invalid_argument("path was simulated without grids");
}

double factorial(int k) {
    double out = 1.0;
    for (int i = 2; i <= k; ++i) out *= i;
    return out;
}

}  // namespace

EstimatorResult summarize(std::span<const double> samples, std::uint64_t seed) {
    EstimatorResult out;
    out.seed = seed;
    out.n_paths = samples.size();
    if (samples.empty()) return out;
    const double n = static_cast<double>(samples.size());
    out.value = pairwise_sum(samples) / n;
    if (samples.size() > 1) {
        std::vector<double> sq(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double d = samples[i] - out.value;
            sq[i] = d * d;
        }
        out.std_err = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    }
    return out;
}

double OptionSetup::discount() const { return std::exp(-rate * tau()); }

EstimatorResult estimate_g0(const PathBatch& batch, const OptionSetup& opt) {
    const double tau = opt.tau();
    return over_paths(batch, [&](const PathFunctionals& p) {
        return bs_call_from_variance(opt.x, opt.strike, opt.rate, tau, p.m_total);
    });
}

EstimatorResult estimate_g1(const PathBatch& batch, const OptionSetup& opt) {
    const double tau = opt.tau();
    const double k_disc = opt.strike * opt.discount();
    return over_paths(batch, [&](const PathFunctionals& p) {
        const double d2 = d2_from_variance(opt.x, opt.strike, opt.rate, tau, p.m_total);
        return -k_disc * d2 * gaussian_pdf(d2) * p.c_total / p.m_total;
    });
}

EstimatorResult estimate_u2_expA(const PathBatch& batch, const OptionSetup& opt) {
    const double tau = opt.tau();
    const double k_disc = opt.strike * opt.discount();
    return over_paths(batch, [&](const PathFunctionals& p) {
        const double d2 = d2_from_variance(opt.x, opt.strike, opt.rate, tau, p.m_total);
        return 2.0 * k_disc * gaussian_deriv(3, d2) * p.ell / (p.m_total * std::sqrt(p.m_total));
    });
}

double compute_xi_k(int k, const PathFunctionals& p, std::size_t s_index,
                    const OptionSetup& opt) {
    if (k < 0 || k > kMaxXiOrder)
        throw std::invalid_argument("compute_xi_k: order must be in [0, " +
                                    std::to_string(kMaxXiOrder) + "]");
    require_grids(p);
    if (s_index >= p.m_running.size())
        throw std::out_of_range("compute_xi_k: grid index out of range");

    const double m = p.m_total;
    const double d2 = d2_from_variance(opt.x, opt.strike, opt.rate, opt.tau(), m);
    const double ratio = p.m_running[s_index] / m;
    const double scaled_i = p.i_running[s_index] / std::sqrt(m);

    // Taylor coefficients of (1 - rho^2 ratio)^{-1/2} are central-binomial
    // multiples of ratio^n; even orders pick up d2, odd orders I_s / sqrt(<M>).
    std::array<double, kMaxXiOrder + 1> d_coef{};
    {
        double binom = 1.0;  // (2n)! / ((n!)^2 4^n)
        double ratio_pow = 1.0;
        for (int n = 0; 2 * n <= k; ++n) {
            if (n > 0) {
                binom *= (2.0 * n - 1.0) / (2.0 * n);
                ratio_pow *= ratio;
            }
            if (2 * n <= k) d_coef[2 * n] = binom * ratio_pow * d2;
            if (2 * n + 1 <= k) d_coef[2 * n + 1] = binom * ratio_pow * scaled_i;
        }
    }

    // power[l] = coefficient of rho^l in (sum_{h>=1} D_h rho^h)^nu, i.e. the
    // sum over compositions of l into nu positive parts.
    std::array<double, kMaxXiOrder + 1> g2{};
    g2[0] = gaussian_deriv(2, d2);
    std::array<double, kMaxXiOrder + 1> power{};
    power[0] = 1.0;
    double nu_fact = 1.0;
    for (int nu = 1; nu <= k; ++nu) {
        std::array<double, kMaxXiOrder + 1> next{};
        for (int l = nu; l <= k; ++l)
            for (int h = 1; h <= l - (nu - 1); ++h) next[l] += d_coef[h] * power[l - h];
        power = next;
        nu_fact *= nu;
        const double n_deriv = gaussian_deriv(2 + nu, d2) / nu_fact;
        for (int l = nu; l <= k; ++l) g2[l] += n_deriv * power[l];
    }

    double sum = 0.0;
    for (int j = 0; j <= k; ++j) {
        const int l = k - j;
        const double g1 = (l % 2 == 0) ? std::pow(ratio, l / 2) : 0.0;
        sum += g1 * g2[j];
    }
    return factorial(k) * sum;
}

EstimatorResult estimate_un_general(int n, const PathBatch& batch, const OptionSetup& opt) {
    if (n < 1 || n > kMaxXiOrder + 1)
        throw std::invalid_argument("estimate_un_general: order must be in [1, " +
                                    std::to_string(kMaxXiOrder + 1) + "]");
    const double dt = batch.grid.dt();
    const double scale = n * opt.strike * opt.discount();
    return over_paths(batch, [&](const PathFunctionals& p) {
        require_grids(p);
        double integral = 0.0;
        for (std::size_t k = 0; k < p.psi.size(); ++k)
            integral += compute_xi_k(n - 1, p, k, opt) * (p.psi[k] * dt);
        return scale * integral / p.m_total;
    });
}

AsClosedForm estimate_as_closed_form(const PathBatch& batch, const OptionSetup& opt) {
    const EstimatorResult m_bar =
        over_paths(batch, [](const PathFunctionals& p) { return p.m_total; });
    const EstimatorResult c_bar =
        over_paths(batch, [](const PathFunctionals& p) { return p.c_total; });
    if (!(m_bar.value > 0.0))
        throw std::runtime_error("estimate_as_closed_form: mean integrated variance not positive");
    const double tau = opt.tau();
    const double d2 = d2_from_variance(opt.x, opt.strike, opt.rate, tau, m_bar.value);
    AsClosedForm out{};
    out.g0_bar = bs_call_from_variance(opt.x, opt.strike, opt.rate, tau, m_bar.value);
    out.g1_bar =
        -opt.strike * opt.discount() * d2 * gaussian_pdf(d2) * c_bar.value / m_bar.value;
    return out;
}

MalliavinWeights malliavin_weights(const PathFunctionals& p, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("malliavin_weights: tau must be positive");
    if (!std::isfinite(p.u_int) || !std::isfinite(p.v_int) || !std::isfinite(p.zint) ||
        !std::isfinite(p.inv_f2))
        throw std::invalid_argument("malliavin_weights: non-finite path functionals");
    const double u = p.u_int;
    const double z = p.zint;
    MalliavinWeights w{};
    w.lam1 = u * z / tau;
    w.lam2 = u * u / (tau * tau) * (z * z - p.inv_f2) - p.v_int * z / tau + 1.0;
    return w;
}

Localizer::Localizer(double strike, double delta) : strike_(strike), delta_(delta) {}

// With u = y - K in [-delta, delta]:
//   Phi'(u) = 3 (u + delta) / (4 delta) - (u^3 + delta^3) / (4 delta^3)
//   Phi(u)  = 3 (u + delta)^2 / (8 delta) - (u^4 - delta^4) / (16 delta^3) - (u + delta) / 4
double Localizer::phi(double y) const {
    if (!enabled()) return std::max(y - strike_, 0.0);
    const double u = y - strike_;
    if (u <= -delta_) return 0.0;
    if (u >= delta_) return u;
    const double d = delta_;
    const double w = u + d;
    return 3.0 * w * w / (8.0 * d) - (u * u * u * u - d * d * d * d) / (16.0 * d * d * d) -
           w / 4.0;
}

double Localizer::dphi(double y) const {
    const double u = y - strike_;
    if (!enabled()) return u > 0.0 ? 1.0 : 0.0;
    if (u <= -delta_) return 0.0;
    if (u >= delta_) return 1.0;
    const double d = delta_;
    return 3.0 * (u + d) / (4.0 * d) - (u * u * u + d * d * d) / (4.0 * d * d * d);
}

double Localizer::d2phi(double y) const {
    if (!enabled()) return 0.0;
    const double u = y - strike_;
    if (u <= -delta_ || u >= delta_) return 0.0;
    const double d = delta_;
    return -3.0 * u * u / (4.0 * d * d * d) + 3.0 / (4.0 * d);
}

Payoff call_payoff(double strike) {
    return [strike](double s) { return std::max(s - strike, 0.0); };
}

EstimatorResult estimate_expM(int order, const PathBatch& batch, const Payoff& payoff,
                              const std::optional<Localizer>& loc, const OptionSetup& opt) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("estimate_expM: order must be 1 or 2");
    const double tau = opt.tau();
    const double disc = opt.discount();
    const bool localized = loc.has_value() && loc->enabled();
    return over_paths(batch, [&](const PathFunctionals& p) {
        const MalliavinWeights w = malliavin_weights(p, tau);
        const double s = std::exp(p.xi_hat_T);
        const double h = payoff(s);
        if (!std::isfinite(h)) throw std::runtime_error("estimate_expM: payoff not finite");
        const double lam = order == 1 ? w.lam1 : w.lam2;
        if (!localized) return disc * h * lam;
        const double u = p.u_int;
        const double residual = (h - loc->phi(s)) * lam;
        if (order == 1) return disc * (residual + loc->dphi(s) * s * u);
        return disc * (residual + loc->d2phi(s) * s * s * u * u +
                       loc->dphi(s) * s * (u * u - p.v_int));
    });
}

ExpansionCoefficients estimate_coefficients(const PathBatch& batch, const OptionSetup& opt,
                                            double delta_factor) {
    ExpansionCoefficients out;
    out.g0 = estimate_g0(batch, opt);
    out.g1 = estimate_g1(batch, opt);
    out.u2 = estimate_u2_expA(batch, opt);
    std::optional<Localizer> loc;
    if (delta_factor > 0.0) loc.emplace(opt.strike, delta_factor * opt.strike);
    out.localized = loc.has_value();
    const Payoff h = call_payoff(opt.strike);
    out.lam1 = estimate_expM(1, batch, h, loc, opt);
    out.lam2 = estimate_expM(2, batch, h, loc, opt);
    const AsClosedForm as = estimate_as_closed_form(batch, opt);
    out.g0_bar = as.g0_bar;
    out.g1_bar = as.g1_bar;
    return out;
}

std::string_view series_method_name(SeriesMethod m) {
    switch (m) {
        case SeriesMethod::expA: return "ExpA";
        case SeriesMethod::expM: return "ExpM";
        case SeriesMethod::as_closed: return "AS";
    }
    return "unknown";
}

SeriesPrice series_price(const ExpansionCoefficients& coeffs, double rho, int order,
                         SeriesMethod method) {
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("series_price: |rho| must be < 1");
    if (order < 0 || order > 2) throw std::invalid_argument("series_price: order must be 0, 1 or 2");
    if (method == SeriesMethod::as_closed && order > 1)
        throw std::invalid_argument("series_price: closed-form AS stops at order 1");

    SeriesPrice out;
    out.large_rho_warning = std::abs(rho) > kRhoWarnThreshold;
    if (method == SeriesMethod::as_closed) {
        out.value = coeffs.g0_bar + (order >= 1 ? coeffs.g1_bar * rho : 0.0);
        out.std_err = 0.0;
        return out;
    }
    const EstimatorResult& first = method == SeriesMethod::expA ? coeffs.g1 : coeffs.lam1;
    const EstimatorResult& second = method == SeriesMethod::expA ? coeffs.u2 : coeffs.lam2;

    double value = coeffs.g0.value;
    double var = coeffs.g0.std_err * coeffs.g0.std_err;
    if (order >= 1) {
        value += first.value * rho;
        var += std::pow(first.std_err * rho, 2);
    }
    if (order >= 2) {
        const double w = rho * rho / 2.0;
        value += second.value * w;
        var += std::pow(second.std_err * w, 2);
    }
    out.value = value;
    out.std_err = std::sqrt(var);
    return out;
}

}  // namespace svseries
