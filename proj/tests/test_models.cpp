#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "svseries/models.hpp"

using namespace svseries;

namespace {

ModelParams hull_white_params() {
    ModelParams p;
    p.mu = 0.2;
    p.c = 0.1;
    p.v0 = 0.2;
    p.r = 0.0953;
    return p;
}

ModelParams stein_stein_params() {
    ModelParams p;
    p.a = 0.2;
    p.b = 4.0;
    p.c = 0.1;
    p.v0 = 0.2;
    p.r = 0.0953;
    return p;
}

ModelParams heston_params() {
    ModelParams p;
    p.a = 0.04;
    p.b = 8.0;
    p.c = 0.1;
    p.v0 = 0.0225;
    p.r = 0.0953;
    return p;
}

std::vector<ModelSpec> perturbed_builtins(double eps) {
    return {make_model(ModelKind::hull_white, hull_white_params(), eps, 0.0),
            make_model(ModelKind::stein_stein, stein_stein_params(), eps, 0.0),
            make_model(ModelKind::heston, heston_params(), eps, 1e-5)};
}

}  // namespace

TEST(Models, HullWhiteCoefficients) {
    const ModelSpec m = make_model("hull_white", hull_white_params(), 0.0, 0.0);
    EXPECT_DOUBLE_EQ(m.f(0.2), 0.2);
    EXPECT_NEAR(m.eta(0.2), 0.02, 1e-17);
    const CoeffBundle cb = eval_coeffs(m, 0.2);
    EXPECT_NEAR(cb.f_fprime, 0.2, 1e-17);
    EXPECT_NEAR(cb.f_eta, 0.004, 1e-17);
    EXPECT_DOUBLE_EQ(cb.mu, 0.04);
    EXPECT_DOUBLE_EQ(cb.mu_prime, 0.2);
    EXPECT_DOUBLE_EQ(cb.eta_prime, 0.1);
}

TEST(Models, ConstantModelIsDegenerate) {
    ModelParams p;
    p.v0 = 0.2;
    const ModelSpec m = make_model("constant", p, 0.0, 0.0);
    for (double v : {-1.0, 0.0, 0.2, 3.0}) {
        const CoeffBundle cb = eval_coeffs(m, v);
        EXPECT_EQ(cb.mu, 0.0);
        EXPECT_EQ(cb.eta, 0.0);
        EXPECT_EQ(cb.f, 0.2);
        EXPECT_EQ(cb.mu_prime, 0.0);
        EXPECT_EQ(cb.eta_prime, 0.0);
        EXPECT_EQ(cb.f_prime, 0.0);
        EXPECT_EQ(cb.f_eta, 0.0);
        EXPECT_EQ(cb.f_fprime, 0.0);
    }
}

TEST(Models, HestonFloorAtZero) {
    const ModelSpec m = make_model("heston", heston_params(), 1e-5, 1e-5);
    EXPECT_DOUBLE_EQ(m.f(0.0), std::sqrt(1e-5));
    EXPECT_DOUBLE_EQ(eval_coeffs(m, 0.0225).f, std::sqrt(0.0225 + 1e-5));
    EXPECT_DOUBLE_EQ(m.eta(0.0), 0.1 * std::sqrt(1e-5));
}

TEST(Models, PerturbedVolatilityIsFloored) {
    const double eps = 1e-5;
    for (const auto& m : perturbed_builtins(eps))
        for (double v = -0.5; v <= 0.5; v += 0.001)
            EXPECT_GE(m.f(v), std::sqrt(eps)) << m.name() << " v=" << v;
}

TEST(Models, DerivativesMatchFiniteDifferences) {
    const double h = 1e-6;
    for (double eps : {0.0, 1e-5}) {
        for (const auto& m : perturbed_builtins(eps)) {
            // keep away from the kink of |v| in the Heston coefficients
            const double lo = m.kind() == ModelKind::heston ? 0.005 : -0.4;
            for (double v = lo; v <= 0.5; v += 0.0125) {
                if (std::abs(v) < 1e-9) continue;
                if (eps == 0.0 && m.kind() != ModelKind::heston && v <= 0.0) continue;
                auto check = [&](auto fn, auto dfn, const char* what) {
                    const double fd = (fn(v + h) - fn(v - h)) / (2 * h);
                    const double exact = dfn(v);
                    EXPECT_NEAR(fd, exact, 1e-5 * std::max(std::abs(exact), 1e-3))
                        << m.name() << " " << what << " v=" << v;
                };
                check([&](double q) { return m.f(q); }, [&](double q) { return m.f_prime(q); }, "f");
                check([&](double q) { return m.mu(q); }, [&](double q) { return m.mu_prime(q); },
                      "mu");
                check([&](double q) { return m.eta(q); },
                      [&](double q) { return m.eta_prime(q); }, "eta");
            }
        }
    }
}

TEST(Models, ZeroEpsilonRecoversUnperturbedVolatility) {
    const auto models = perturbed_builtins(0.0);
    for (double v = 0.001; v <= 0.5; v += 0.01) {
        EXPECT_EQ(models[0].f(v), v);
        EXPECT_EQ(models[1].f(v), v);
        EXPECT_EQ(models[2].f(v), std::sqrt(v));
    }
}

TEST(Models, ProductsMatchFactors) {
    for (const auto& m : perturbed_builtins(1e-5)) {
        for (double v : {-0.1, 0.01, 0.3}) {
            const CoeffBundle cb = m.eval(v);
            EXPECT_EQ(cb.f_eta, cb.f * cb.eta);
            EXPECT_EQ(cb.f_fprime, cb.f * cb.f_prime);
            for (double q : {cb.mu, cb.eta, cb.f, cb.mu_prime, cb.eta_prime, cb.f_prime})
                EXPECT_TRUE(std::isfinite(q));
        }
    }
}

TEST(Models, NovikovFlag) {
    EXPECT_TRUE(heston_params().novikov());
    ModelParams p = heston_params();
    p.a = 0.035;
    p.b = 1.15;
    p.c = 0.39;
    EXPECT_FALSE(p.novikov());
}

TEST(Models, Errors) {
    EXPECT_THROW(make_model("sabr", hull_white_params(), 0.0, 0.0), std::invalid_argument);
    ModelParams p = hull_white_params();
    p.c = 0.0;
    EXPECT_THROW(make_model("hull_white", p, 0.0, 0.0), std::invalid_argument);
    EXPECT_THROW(make_model("hull_white", hull_white_params(), -1e-5, 0.0), std::invalid_argument);
    EXPECT_THROW(make_model("heston", heston_params(), 1e-5, -1.0), std::invalid_argument);
}
