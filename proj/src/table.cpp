#include "svseries/table.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "svseries/core_math.hpp"
#include "svseries/estimators.hpp"
#include "svseries/path_engine.hpp"

namespace svseries {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CellEstimate {
    bool ok = false;
    std::string error;
    ExpansionCoefficients coeffs;
    double seconds = 0.0;
};

// Benchmark model is the unperturbed one: references price the true dynamics.
ModelSpec benchmark_model(const ExperimentConfig& cfg) {
    return make_model(cfg.model, cfg.params, 0.0, 0.0);
}

}  // namespace

BenchmarkCache::BenchmarkCache(std::filesystem::path dir, bool refresh)
    : dir_(std::move(dir)), refresh_(refresh) {}

std::filesystem::path BenchmarkCache::file_for(const std::string& key) const {
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.bench",
                  static_cast<unsigned long long>(fnv1a(key)));
    return dir_ / name;
}

std::optional<BenchmarkPrice> BenchmarkCache::load(const std::string& key) const {
    if (refresh_) return std::nullopt;
    std::ifstream in(file_for(key));
    if (!in) return std::nullopt;
    std::string stored_key;
    std::getline(in, stored_key);
    if (stored_key != key) return std::nullopt;
    BenchmarkPrice p;
    int source = 0;
    if (!(in >> p.value >> p.std_err >> source)) return std::nullopt;
    p.source = static_cast<BenchmarkSource>(source);
    return p;
}

void BenchmarkCache::store(const std::string& key, const BenchmarkPrice& price) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    std::ofstream out(file_for(key));
    if (!out) return;  // cache is best effort
    out << key << '\n'
        << exact(price.value) << ' ' << exact(price.std_err) << ' '
        << static_cast<int>(price.source) << '\n';
}

std::string benchmark_key(const ExperimentConfig& cfg, double rho, double strike,
                          double maturity) {
    std::ostringstream k;
    const auto& p = cfg.params;
    k << "model=" << model_kind_name(cfg.model) << ";mu=" << exact(p.mu) << ";a=" << exact(p.a)
      << ";b=" << exact(p.b) << ";c=" << exact(p.c) << ";r=" << exact(p.r)
      << ";s0=" << exact(p.s0) << ";v0=" << exact(p.v0) << ";rho=" << exact(rho)
      << ";K=" << exact(strike) << ";T=" << exact(maturity);
    switch (cfg.resolved_benchmark()) {
        case BenchmarkKind::highres_mc:
            k << ";oracle=highres_mc;paths=" << cfg.benchmark_paths
              << ";steps=" << cfg.benchmark_steps << ";seed=" << cfg.benchmark_seed;
            break;
        case BenchmarkKind::heston_cf: k << ";oracle=heston_cf"; break;
        case BenchmarkKind::closed_form_bs: k << ";oracle=closed_form_bs"; break;
        case BenchmarkKind::automatic: break;
    }
    return k.str();
}

TableArtifact run_table(const ExperimentConfig& cfg, const RunOptions& opts) {
    validate(cfg);
    const ModelSpec model = make_model(cfg.model, cfg.params, cfg.epsilon, cfg.gamma);
    const BenchmarkCache cache(opts.cache_dir, opts.oracle_refresh);
    const double x0 = std::log(cfg.params.s0);
    const double v0 = cfg.params.v0;
    auto log = [&](const std::string& msg) {
        if (opts.log) *opts.log << msg << '\n';
    };

    // Expansion coefficients per (T, K), from one rho = 0 batch per maturity.
    std::map<std::pair<double, double>, CellEstimate> estimates;
    for (double maturity : cfg.maturities) {
        const auto start = Clock::now();
        std::optional<PathBatch> batch;
        std::string batch_error;
        try {
            batch = simulate_batch(model, TimeGrid{0.0, maturity, cfg.n_steps}, x0, v0, 0.0,
                                   cfg.seed, cfg.n_paths, opts.workers, false);
        } catch (const std::exception& e) {
            batch_error = e.what();
        }
        const double batch_seconds = seconds_since(start) / static_cast<double>(cfg.strikes.size());
        log("T=" + fixed6(maturity) + ": simulated " + std::to_string(cfg.n_paths) + " paths");
        for (double strike : cfg.strikes) {
            CellEstimate cell;
            const auto cell_start = Clock::now();
            if (!batch) {
                cell.error = batch_error;
            } else {
                try {
                    const OptionSetup opt{strike, cfg.params.r, 0.0, maturity, x0};
                    cell.coeffs = estimate_coefficients(*batch, opt, cfg.delta_factor);
                    cell.ok = true;
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
            }
            cell.seconds = batch_seconds + seconds_since(cell_start);
            estimates.emplace(std::make_pair(maturity, strike), std::move(cell));
        }
    }

    // Benchmarks per (rho, T, K); high-resolution MC prices all strikes of a
    // (rho, T) pair on one set of paths.
    std::map<std::tuple<double, double, double>, std::optional<BenchmarkPrice>> bench;
    std::map<std::tuple<double, double, double>, std::string> bench_error;
    for (double rho : cfg.rhos) {
        for (double maturity : cfg.maturities) {
            std::vector<double> missing;
            for (double strike : cfg.strikes) {
                const auto key = benchmark_key(cfg, rho, strike, maturity);
                if (auto hit = cache.load(key)) bench[{rho, maturity, strike}] = *hit;
                else missing.push_back(strike);
            }
            if (missing.empty()) continue;
            try {
                std::vector<BenchmarkPrice> prices;
                switch (cfg.resolved_benchmark()) {
                    case BenchmarkKind::highres_mc:
                        log("benchmark: high-resolution MC, rho=" + fixed6(rho) +
                            " T=" + fixed6(maturity));
                        prices = highres_mc_prices(benchmark_model(cfg), rho, missing, maturity,
                                                   cfg.benchmark_paths, cfg.benchmark_steps,
                                                   cfg.benchmark_seed, opts.workers);
                        break;
                    case BenchmarkKind::heston_cf:
                        for (double k : missing)
                            prices.push_back(heston_cf_price(cfg.params, k, maturity, rho));
                        break;
                    case BenchmarkKind::closed_form_bs:
                        for (double k : missing) {
                            const BsInputs b{0.0, x0, cfg.params.v0, k, cfg.params.r, maturity};
                            prices.push_back({bs_call_price(b), 0.0, BenchmarkSource::closed_form_bs});
                        }
                        break;
                    case BenchmarkKind::automatic: break;
                }
                for (std::size_t i = 0; i < missing.size(); ++i) {
                    cache.store(benchmark_key(cfg, rho, missing[i], maturity), prices[i]);
                    bench[{rho, maturity, missing[i]}] = prices[i];
                }
            } catch (const std::exception& e) {
                for (double k : missing) {
                    bench[{rho, maturity, k}] = std::nullopt;
                    bench_error[{rho, maturity, k}] = e.what();
                }
            }
        }
    }

    TableArtifact table;
    table.title = cfg.title;
    for (double rho : cfg.rhos) {
        for (double maturity : cfg.maturities) {
            for (double strike : cfg.strikes) {
                const CellEstimate& cell = estimates.at({maturity, strike});
                const auto& truth = bench[{rho, maturity, strike}];
                for (Method method : cfg.methods) {
                    TableRow row;
                    row.rho = rho;
                    row.maturity = maturity;
                    row.strike = strike;
                    row.method = method;
                    row.seconds = cell.seconds;
                    try {
                        if (!cell.ok) throw std::runtime_error(cell.error);
                        if (!truth)
                            throw std::runtime_error("benchmark failed: " +
                                                     bench_error[{rho, maturity, strike}]);
                        SeriesMethod family = SeriesMethod::expA;
                        int order = 1;
                        switch (method) {
                            case Method::as_closed: family = SeriesMethod::as_closed; break;
                            case Method::expA1: break;
                            case Method::expA2: order = 2; break;
                            case Method::expM1: family = SeriesMethod::expM; break;
                            case Method::expM2:
                                family = SeriesMethod::expM;
                                order = 2;
                                break;
                        }
                        const SeriesPrice sp = series_price(cell.coeffs, rho, order, family);
                        row.price = sp.value;
                        row.std_err = sp.std_err;
                        row.benchmark = truth->value;
                        row.pct_error = percentage_error(sp.value, *truth);
                    } catch (const std::exception& e) {
                        row.failed = true;
                        row.error = e.what();
                    }
                    table.rows.push_back(std::move(row));
                }
            }
        }
    }
    return table;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string emit_csv(const TableArtifact& table, bool with_timings) {
    std::string out = "rho,T,K,method,price,benchmark,pct_error,stderr,seconds\n";
    for (const auto& row : table.rows) {
        out += fixed6(row.rho) + ',' + fixed6(row.maturity) + ',' + fixed6(row.strike) + ',' +
               csv_field(std::string(method_label(row.method))) + ',';
        if (row.failed) {
            out += csv_field("failed: " + row.error) + ",,,,";
        } else {
            out += fixed6(row.price) + ',' + fixed6(row.benchmark) + ',' +
                   fixed6(row.pct_error) + ',' + fixed6(row.std_err) + ',';
        }
        if (with_timings) out += fixed6(row.seconds);
        out += '\n';
    }
    return out;
}

std::string emit_markdown(const TableArtifact& table, bool with_timings) {
    std::string out;
    if (!table.title.empty()) out += "### " + table.title + "\n\n";
    out += "| rho | T | K | method | price | benchmark | pct_error | stderr | seconds |\n";
    out += "|---:|---:|---:|:---|---:|---:|---:|---:|---:|\n";
    for (const auto& row : table.rows) {
        out += "| " + fixed6(row.rho) + " | " + fixed6(row.maturity) + " | " +
               fixed6(row.strike) + " | " + std::string(method_label(row.method)) + " | ";
        if (row.failed) {
            out += "failed: " + row.error + " | | | | ";
        } else {
            out += fixed6(row.price) + " | " + fixed6(row.benchmark) + " | " +
                   fixed6(row.pct_error) + " | " + fixed6(row.std_err) + " | ";
        }
        out += (with_timings ? fixed6(row.seconds) : std::string()) + " |\n";
    }
    return out;
}

}  // namespace svseries
