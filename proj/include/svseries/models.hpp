#pragma once

#include <string>
#include <string_view>

namespace svseries {

enum class ModelKind { hull_white, stein_stein, heston, constant };

ModelKind parse_model_kind(std::string_view name);
std::string_view model_kind_name(ModelKind kind);

/// Model scalars. Hull-White reads (mu, c); Stein-Stein and Heston read
/// (a, b, c); the constant model reads only v0 as its volatility.
struct ModelParams {
    double mu = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double r = 0.0;
    double s0 = 100.0;
    double v0 = 0.0;

    /// 2ab >= c^2; informational only.
    bool novikov() const { return 2.0 * a * b >= c * c; }
};

/// Coefficients of the volatility SDE and asset volatility at one point.
struct CoeffBundle {
    double mu;
    double eta;
    double f;
    double mu_prime;
    double eta_prime;
    double f_prime;
    double f_eta;    ///< f * eta
    double f_fprime; ///< f * f'
};

/// Volatility model dv = mu(v) dt + eta(v) dB1, asset volatility f(v).
///
/// With epsilon > 0 the asset volatility is floored as sqrt(|v|^{2 alpha} + epsilon)
/// (alpha = 1 for f(v) = v, alpha = 1/2 for Heston). For Heston, gamma > 0 replaces
/// the square-root diffusion by c sqrt(|v| + gamma). Immutable once built.
class ModelSpec {
public:
    ModelSpec(ModelKind kind, ModelParams params, double epsilon, double gamma);

    ModelKind kind() const { return kind_; }
    const ModelParams& params() const { return params_; }
    double epsilon() const { return epsilon_; }
    double gamma() const { return gamma_; }
    std::string_view name() const { return model_kind_name(kind_); }

    double mu(double v) const;
    double eta(double v) const;
    double f(double v) const;
    double mu_prime(double v) const;
    double eta_prime(double v) const;
    double f_prime(double v) const;

    CoeffBundle eval(double v) const;

private:
    ModelKind kind_;
    ModelParams params_;
    double epsilon_;
    double gamma_;
};

/// Default perturbations used for Stein-Stein and Heston runs.
inline constexpr double kDefaultEpsilon = 1e-5;
inline constexpr double kDefaultGamma = 1e-5;

ModelSpec make_model(ModelKind kind, const ModelParams& params, double epsilon, double gamma);
ModelSpec make_model(std::string_view name, const ModelParams& params, double epsilon,
                     double gamma);

inline CoeffBundle eval_coeffs(const ModelSpec& m, double v) { return m.eval(v); }

}  // namespace svseries
