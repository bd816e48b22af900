#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "svseries/config.hpp"
#include "svseries/oracles.hpp"

namespace svseries {

struct TableRow {
    double rho = 0.0;
    double maturity = 0.0;
    double strike = 0.0;
    Method method = Method::expA1;
    bool failed = false;
    std::string error;
    double price = 0.0;
    double benchmark = 0.0;
    double pct_error = 0.0;
    double std_err = 0.0;
    double seconds = 0.0;
};

struct TableArtifact {
    std::string title;
    std::vector<TableRow> rows;
};

/// On-disk store of benchmark prices, one small text file per key.
class BenchmarkCache {
public:
    explicit BenchmarkCache(std::filesystem::path dir, bool refresh = false);

    std::optional<BenchmarkPrice> load(const std::string& key) const;
    void store(const std::string& key, const BenchmarkPrice& price) const;

private:
    std::filesystem::path file_for(const std::string& key) const;

    std::filesystem::path dir_;
    bool refresh_;
};

struct RunOptions {
    unsigned workers = 0;
    std::filesystem::path cache_dir = ".price_cache";
    bool oracle_refresh = false;
    /// Progress lines go here when set.
    std::ostream* log = nullptr;
};

/// Prices every (rho, T, K, method) cell of the config. One batch at rho = 0
/// per maturity is shared by all methods, strikes and correlations. A cell
/// that throws is recorded as failed and the run continues.
TableArtifact run_table(const ExperimentConfig& cfg, const RunOptions& opts);

/// Benchmark key used by the cache; exposed for tests.
std::string benchmark_key(const ExperimentConfig& cfg, double rho, double strike,
                          double maturity);

/// CSV columns: rho,T,K,method,price,benchmark,pct_error,stderr,seconds, fixed
/// point with 6 decimals, LF line endings. Timing is written only when
/// `with_timings` is set, so that reruns are byte-identical.
std::string emit_csv(const TableArtifact& table, bool with_timings = false);
std::string emit_markdown(const TableArtifact& table, bool with_timings = false);

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(const std::string& s);

}  // namespace svseries
