#include "svseries/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace svseries {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view s, std::size_t line, std::string_view key) {
    s = trim(s);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError(line, "field '" + std::string(key) + "': not a number: '" +
                                    std::string(s) + "'");
    return out;
}

long long parse_int(std::string_view s, std::size_t line, std::string_view key) {
    // accept 1e4 style integers
    const double d = parse_double(s, line, key);
    if (d != std::floor(d) || std::abs(d) > 9.0e18)
        throw ConfigError(line, "field '" + std::string(key) + "': not an integer");
    return static_cast<long long>(d);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

std::vector<double> parse_list(std::string_view s, std::size_t line, std::string_view key) {
    std::vector<double> out;
    for (auto item : split_list(s)) out.push_back(parse_double(item, line, key));
    return out;
}

ModelParams published_params(ModelKind kind) {
    ModelParams p;
    p.r = 0.0953;
    p.s0 = 100.0;
    switch (kind) {
        case ModelKind::hull_white:
            p.mu = 0.2;
            p.c = 0.1;
            p.v0 = 0.2;
            break;
        case ModelKind::stein_stein:
            p.a = 0.2;
            p.b = 4.0;
            p.c = 0.1;
            p.v0 = 0.2;
            break;
        case ModelKind::heston:
            p.a = 0.04;
            p.b = 8.0;
            p.c = 0.1;
            p.v0 = 0.0225;
            break;
        case ModelKind::constant: p.v0 = 0.2; break;
    }
    return p;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& msg)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
      line_(line) {}

std::string_view method_label(Method m) {
    switch (m) {
        case Method::as_closed: return "AS";
        case Method::expA1: return "ExpA-1";
        case Method::expA2: return "ExpA-2";
        case Method::expM1: return "ExpM-1";
        case Method::expM2: return "ExpM-2";
    }
    return "unknown";
}

Method parse_method(std::string_view label) {
    for (Method m : {Method::as_closed, Method::expA1, Method::expA2, Method::expM1,
                     Method::expM2})
        if (method_label(m) == label) return m;
    throw std::invalid_argument("unknown method '" + std::string(label) + "'");
}

BenchmarkKind ExperimentConfig::resolved_benchmark() const {
    if (benchmark != BenchmarkKind::automatic) return benchmark;
    switch (model) {
        case ModelKind::heston: return BenchmarkKind::heston_cf;
        case ModelKind::constant: return BenchmarkKind::closed_form_bs;
        default: return BenchmarkKind::highres_mc;
    }
}

ExperimentConfig parse_config(std::string_view text) {
    // First pass: collect key/value pairs with their line numbers.
    std::map<std::string, std::pair<std::string, std::size_t>> entries;
    std::size_t line_no = 0;
    std::size_t model_line = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError(line_no, "empty key");
        if (value.empty()) throw ConfigError(line_no, "field '" + key + "': empty value");
        if (!entries.emplace(key, std::make_pair(value, line_no)).second)
            throw ConfigError(line_no, "field '" + key + "' given twice");
        if (key == "model") model_line = line_no;
    }

    ExperimentConfig cfg;
    const auto model_it = entries.find("model");
    if (model_it == entries.end()) throw ConfigError(0, "field 'model' is required");
    try {
        cfg.model = parse_model_kind(model_it->second.first);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(model_line, std::string("field 'model': ") + e.what());
    }
    cfg.params = published_params(cfg.model);
    cfg.epsilon = (cfg.model == ModelKind::stein_stein || cfg.model == ModelKind::heston)
                      ? kDefaultEpsilon
                      : 0.0;

    for (const auto& [key, entry] : entries) {
        const auto& [value, line] = entry;
        if (key == "model") continue;
        if (key == "title") cfg.title = value;
        else if (key == "mu") cfg.params.mu = parse_double(value, line, key);
        else if (key == "a") cfg.params.a = parse_double(value, line, key);
        else if (key == "b") cfg.params.b = parse_double(value, line, key);
        else if (key == "c") cfg.params.c = parse_double(value, line, key);
        else if (key == "r") cfg.params.r = parse_double(value, line, key);
        else if (key == "s0") cfg.params.s0 = parse_double(value, line, key);
        else if (key == "v0") cfg.params.v0 = parse_double(value, line, key);
        else if (key == "strikes") cfg.strikes = parse_list(value, line, key);
        else if (key == "maturities") cfg.maturities = parse_list(value, line, key);
        else if (key == "rhos") cfg.rhos = parse_list(value, line, key);
        else if (key == "methods") {
            cfg.methods.clear();
            for (auto item : split_list(value)) {
                try {
                    cfg.methods.push_back(parse_method(item));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(line, std::string("field 'methods': ") + e.what());
                }
            }
        } else if (key == "n_steps") {
            cfg.n_steps = static_cast<int>(parse_int(value, line, key));
        } else if (key == "n_paths") {
            const long long n = parse_int(value, line, key);
            if (n < 0) throw ConfigError(line, "field 'n_paths': must be positive");
            cfg.n_paths = static_cast<std::size_t>(n);
        } else if (key == "seed") {
            const long long s = parse_int(value, line, key);
            if (s < 0) throw ConfigError(line, "field 'seed': must be nonnegative");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (key == "benchmark") {
            if (value == "auto") cfg.benchmark = BenchmarkKind::automatic;
            else if (value == "highres_mc") cfg.benchmark = BenchmarkKind::highres_mc;
            else if (value == "heston_cf") cfg.benchmark = BenchmarkKind::heston_cf;
            else if (value == "closed_form_bs") cfg.benchmark = BenchmarkKind::closed_form_bs;
            else throw ConfigError(line, "field 'benchmark': unknown source '" + value + "'");
        } else if (key == "benchmark_paths") {
            const long long n = parse_int(value, line, key);
            if (n < 2) throw ConfigError(line, "field 'benchmark_paths': must be >= 2");
            cfg.benchmark_paths = static_cast<std::size_t>(n);
        } else if (key == "benchmark_steps") {
            cfg.benchmark_steps = static_cast<int>(parse_int(value, line, key));
        } else if (key == "benchmark_seed") {
            const long long s = parse_int(value, line, key);
            if (s < 0) throw ConfigError(line, "field 'benchmark_seed': must be nonnegative");
            cfg.benchmark_seed = static_cast<std::uint64_t>(s);
        } else if (key == "delta_factor") {
            cfg.delta_factor = parse_double(value, line, key);
        } else if (key == "epsilon") {
            cfg.epsilon = parse_double(value, line, key);
        } else if (key == "gamma") {
            cfg.gamma = parse_double(value, line, key);
        } else if (key == "format") {
            if (value == "csv") cfg.format = OutputFormat::csv;
            else if (value == "markdown") cfg.format = OutputFormat::markdown;
            else throw ConfigError(line, "field 'format': expected csv or markdown");
        } else {
            throw ConfigError(line, "unknown field '" + key + "'");
        }
    }
    validate(cfg);
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    auto fail = [](const std::string& field, const std::string& msg) {
        throw ConfigError(0, "field '" + field + "': " + msg);
    };
    if (cfg.strikes.empty()) fail("strikes", "must be a nonempty list");
    for (double k : cfg.strikes)
        if (!(k > 0.0)) fail("strikes", "must be positive");
    if (cfg.maturities.empty()) fail("maturities", "must be a nonempty list");
    for (double t : cfg.maturities)
        if (!(t > 0.0)) fail("maturities", "must be positive");
    if (cfg.rhos.empty()) fail("rhos", "must be a nonempty list");
    for (double r : cfg.rhos)
        if (!(std::abs(r) < 1.0)) fail("rhos", "must lie in (-1, 1)");
    if (cfg.methods.empty()) fail("methods", "must be a nonempty list");
    std::set<Method> seen(cfg.methods.begin(), cfg.methods.end());
    if (seen.size() != cfg.methods.size()) fail("methods", "listed twice");
    std::set<double> uniq_k(cfg.strikes.begin(), cfg.strikes.end());
    if (uniq_k.size() != cfg.strikes.size()) fail("strikes", "listed twice");
    std::set<double> uniq_t(cfg.maturities.begin(), cfg.maturities.end());
    if (uniq_t.size() != cfg.maturities.size()) fail("maturities", "listed twice");
    std::set<double> uniq_r(cfg.rhos.begin(), cfg.rhos.end());
    if (uniq_r.size() != cfg.rhos.size()) fail("rhos", "listed twice");
    if (cfg.n_steps < 2) fail("n_steps", "must be >= 2");
    if (cfg.n_paths < 100) fail("n_paths", "must be >= 100");
    if (cfg.benchmark_steps < 2) fail("benchmark_steps", "must be >= 2");
    if (!(cfg.epsilon >= 0.0)) fail("epsilon", "must be nonnegative");
    if (!(cfg.gamma >= 0.0)) fail("gamma", "must be nonnegative");
    if (!std::isfinite(cfg.delta_factor)) fail("delta_factor", "must be finite");
    if (!(cfg.params.s0 > 0.0)) fail("s0", "must be positive");
    if (cfg.model != ModelKind::constant && !(cfg.params.c > 0.0)) fail("c", "must be positive");
    if (cfg.model == ModelKind::constant && !(cfg.params.v0 > 0.0))
        fail("v0", "constant model needs a positive volatility");
    if (cfg.resolved_benchmark() == BenchmarkKind::heston_cf && cfg.model != ModelKind::heston)
        fail("benchmark", "heston_cf needs model = heston");
    if (cfg.resolved_benchmark() == BenchmarkKind::closed_form_bs &&
        cfg.model != ModelKind::constant)
        fail("benchmark", "closed_form_bs needs model = constant");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace svseries
