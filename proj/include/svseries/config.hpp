#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "svseries/models.hpp"

namespace svseries {

/// Price approximations a table can report.
enum class Method { as_closed, expA1, expA2, expM1, expM2 };

std::string_view method_label(Method m);
Method parse_method(std::string_view label);

enum class BenchmarkKind { automatic, highres_mc, heston_cf, closed_form_bs };

enum class OutputFormat { csv, markdown };

struct ExperimentConfig {
    std::string title;
    ModelKind model = ModelKind::hull_white;
    ModelParams params;
    std::vector<double> strikes;
    std::vector<double> maturities{0.5};
    std::vector<double> rhos{-0.5};
    std::vector<Method> methods{Method::as_closed, Method::expA1, Method::expA2, Method::expM1,
                                Method::expM2};
    int n_steps = 500;
    std::size_t n_paths = 10'000;
    std::uint64_t seed = 1;
    BenchmarkKind benchmark = BenchmarkKind::automatic;
    std::size_t benchmark_paths = 1'000'000;
    int benchmark_steps = 1'000;
    std::uint64_t benchmark_seed = 20'240'601;
    double delta_factor = 0.01;
    double epsilon = 0.0;
    double gamma = 1e-5;
    OutputFormat format = OutputFormat::csv;

    /// Benchmark actually used once `automatic` is resolved by model.
    BenchmarkKind resolved_benchmark() const;
};

/// Parse or validation failure; `line` is 0 for whole-file validation errors.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& msg);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Flat `key = value` format, `#` starts a comment, lists are comma separated.
/// Unknown and repeated keys are errors. Model parameters not given default to
/// the published parameter set of the chosen model.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

void validate(const ExperimentConfig& cfg);

}  // namespace svseries
