// price: runs correlation-expansion pricing experiments and writes
// percentage-error tables.
//
//   price run --config <file> [--seed N] [--workers N] [--out <path>] [--oracle-refresh]
//   price bench --table {1|2|3|4} [same options]

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "svseries/config.hpp"
#include "svseries/table.hpp"

#ifndef SVSERIES_CONFIG_DIR
#define SVSERIES_CONFIG_DIR "configs"
#endif

namespace {

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    unsigned workers = 0;
    std::string out;
    bool oracle_refresh = false;
    bool timings = false;
    std::string format;
    std::string cache_dir = ".price_cache";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--seed", f.seed, "Override the Monte Carlo seed");
    cmd->add_option("--workers", f.workers, "Worker threads (0 = hardware concurrency)");
    cmd->add_option("--out", f.out, "Output file (default: stdout)");
    cmd->add_flag("--oracle-refresh", f.oracle_refresh, "Recompute cached benchmark prices");
    cmd->add_flag("--timings", f.timings, "Fill the seconds column (output is then not reproducible)");
    cmd->add_option("--format", f.format, "Override the output format")
        ->check(CLI::IsMember({"csv", "markdown"}));
    cmd->add_option("--cache-dir", f.cache_dir, "Benchmark cache directory");
}

std::vector<std::filesystem::path> bench_configs(int table, const std::filesystem::path& dir) {
    switch (table) {
        case 1: return {dir / "table1_hull_white.cfg"};
        case 2: return {dir / "table2_stein_stein.cfg"};
        case 3: return {dir / "table3_heston_novikov.cfg"};
        case 4: return {dir / "table4_heston_long.cfg", dir / "table4_heston_short.cfg"};
        default: throw std::invalid_argument("unknown table " + std::to_string(table));
    }
}

int run(const std::vector<std::filesystem::path>& configs, const CommonFlags& f) {
    svseries::TableArtifact merged;
    svseries::OutputFormat format = svseries::OutputFormat::csv;
    svseries::RunOptions opts;
    opts.workers = f.workers;
    opts.cache_dir = f.cache_dir;
    opts.oracle_refresh = f.oracle_refresh;
    opts.log = &std::cerr;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        svseries::ExperimentConfig cfg = svseries::load_config(configs[i]);
        if (f.seed) cfg.seed = *f.seed;
        if (i == 0) {
            format = cfg.format;
            merged.title = cfg.title;
        }
        std::cerr << "running " << configs[i].string() << '\n';
        auto table = svseries::run_table(cfg, opts);
        for (auto& row : table.rows) merged.rows.push_back(std::move(row));
    }
    if (f.format == "csv") format = svseries::OutputFormat::csv;
    if (f.format == "markdown") format = svseries::OutputFormat::markdown;

    const std::string text = format == svseries::OutputFormat::csv
                                 ? svseries::emit_csv(merged, f.timings)
                                 : svseries::emit_markdown(merged, f.timings);
    if (f.out.empty()) {
        std::cout << text;
        return std::cout ? 0 : 1;
    }
    std::ofstream out(f.out, std::ios::binary);
    if (!(out << text)) {
        std::cerr << "error: cannot write " << f.out << '\n';
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation-expansion option pricing experiments"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
    run_cmd->add_option("--config", config_path, "Experiment config file")->required();
    add_common(run_cmd, run_flags);

    CommonFlags bench_flags;
    int table = 0;
    std::string config_dir = SVSERIES_CONFIG_DIR;
    auto* bench_cmd = app.add_subcommand("bench", "Run one of the shipped table configs");
    bench_cmd->add_option("--table", table, "Table number")->required()->check(CLI::Range(1, 4));
    bench_cmd->add_option("--config-dir", config_dir, "Directory holding the shipped configs");
    add_common(bench_cmd, bench_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return run({config_path}, run_flags);
        return run(bench_configs(table, config_dir), bench_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
