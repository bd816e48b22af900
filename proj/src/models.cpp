#include "svseries/models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace svseries {

namespace {

double sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

ModelKind parse_model_kind(std::string_view name) {
    if (name == "hull_white") return ModelKind::hull_white;
    if (name == "stein_stein") return ModelKind::stein_stein;
    if (name == "heston") return ModelKind::heston;
    if (name == "constant") return ModelKind::constant;
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

std::string_view model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::hull_white: return "hull_white";
        case ModelKind::stein_stein: return "stein_stein";
        case ModelKind::heston: return "heston";
        case ModelKind::constant: return "constant";
    }
    return "unknown";
}

ModelSpec::ModelSpec(ModelKind kind, ModelParams params, double epsilon, double gamma)
    : kind_(kind), params_(params), epsilon_(epsilon), gamma_(gamma) {
    if (!(epsilon >= 0.0) || !(gamma >= 0.0))
        throw std::invalid_argument("epsilon and gamma must be nonnegative");
    if (!(params.s0 > 0.0)) throw std::invalid_argument("s0 must be positive");
    if (!std::isfinite(params.r)) throw std::invalid_argument("r must be finite");
    if (kind == ModelKind::constant) {
        if (!(params.v0 > 0.0))
            throw std::invalid_argument("constant model needs a positive volatility v0");
    } else if (!(params.c > 0.0)) {
        throw std::invalid_argument("c must be positive for model " +
                                    std::string(model_kind_name(kind)));
    }
}

double ModelSpec::mu(double v) const {
    switch (kind_) {
        case ModelKind::hull_white: return params_.mu * v;
        case ModelKind::stein_stein:
        case ModelKind::heston: return params_.b * (params_.a - v);
        case ModelKind::constant: return 0.0;
    }
    return 0.0;
}

double ModelSpec::mu_prime(double) const {
    switch (kind_) {
        case ModelKind::hull_white: return params_.mu;
        case ModelKind::stein_stein:
        case ModelKind::heston: return -params_.b;
        case ModelKind::constant: return 0.0;
    }
    return 0.0;
}

double ModelSpec::eta(double v) const {
    switch (kind_) {
        case ModelKind::hull_white: return params_.c * v;
        case ModelKind::stein_stein: return params_.c;
        case ModelKind::heston: return params_.c * std::sqrt(std::abs(v) + gamma_);
        case ModelKind::constant: return 0.0;
    }
    return 0.0;
}

double ModelSpec::eta_prime(double v) const {
    switch (kind_) {
        case ModelKind::hull_white: return params_.c;
        case ModelKind::stein_stein: return 0.0;
        case ModelKind::heston: {
            const double root = std::sqrt(std::abs(v) + gamma_);
            return root > 0.0 ? params_.c * sign(v) / (2.0 * root) : 0.0;
        }
        case ModelKind::constant: return 0.0;
    }
    return 0.0;
}

double ModelSpec::f(double v) const {
    switch (kind_) {
        case ModelKind::hull_white:
        case ModelKind::stein_stein:
            return epsilon_ > 0.0 ? std::sqrt(v * v + epsilon_) : v;
        case ModelKind::heston: return std::sqrt(std::abs(v) + epsilon_);
        case ModelKind::constant: return params_.v0;
    }
    return 0.0;
}

double ModelSpec::f_prime(double v) const {
    switch (kind_) {
        case ModelKind::hull_white:
        case ModelKind::stein_stein:
            return epsilon_ > 0.0 ? v / std::sqrt(v * v + epsilon_) : 1.0;
        case ModelKind::heston: {
            const double root = std::sqrt(std::abs(v) + epsilon_);
            return root > 0.0 ? sign(v) / (2.0 * root) : 0.0;
        }
        case ModelKind::constant: return 0.0;
    }
    return 0.0;
}

CoeffBundle ModelSpec::eval(double v) const {
    CoeffBundle out{};
    out.mu = mu(v);
    out.eta = eta(v);
    out.f = f(v);
    out.mu_prime = mu_prime(v);
    out.eta_prime = eta_prime(v);
    out.f_prime = f_prime(v);
    out.f_eta = out.f * out.eta;
    out.f_fprime = out.f * out.f_prime;
    return out;
}

ModelSpec make_model(ModelKind kind, const ModelParams& params, double epsilon, double gamma) {
    // gamma only has a role in the square-root diffusion
    return ModelSpec(kind, params, epsilon, kind == ModelKind::heston ? gamma : 0.0);
}

ModelSpec make_model(std::string_view name, const ModelParams& params, double epsilon,
                     double gamma) {
    return make_model(parse_model_kind(name), params, epsilon, gamma);
}

}  // namespace svseries
