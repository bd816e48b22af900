#include "svseries/path_engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace svseries {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void check_rho(double rho) {
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("rho must lie in (-1, 1)");
}

}  // namespace

void TimeGrid::validate() const {
    if (!(T > t)) throw std::invalid_argument("TimeGrid: T must exceed t");
    if (n_steps < 2) throw std::invalid_argument("TimeGrid: n_steps must be >= 2");
}

NormalSource::NormalSource(RngStream stream)
    : engine_(splitmix64(stream.seed ^ splitmix64(stream.stream_id))) {}

PathFunctionals simulate_path_from_normals(const ModelSpec& m, const TimeGrid& grid, double x0,
                                           double v0, double rho, std::span<const double> z1,
                                           std::span<const double> z2, bool keep_grids) {
    grid.validate();
    check_rho(rho);
    const auto n = static_cast<std::size_t>(grid.n_steps);
    if (z1.size() < n || z2.size() < n)
        throw std::invalid_argument("simulate_path: need one normal pair per step");

    const double dt = grid.dt();
    const double sq = std::sqrt(dt);
    const double r = m.params().r;
    const double rho_bar = std::sqrt(1.0 - rho * rho);

    PathFunctionals out;
    if (keep_grids) {
        out.psi.resize(n);
        out.i_running.resize(n + 1);
        out.m_running.resize(n + 1);
    }
    // (ff')(v_k) Y_k and (f eta)(v_k) / Y_k, consumed by the backward pass
    std::vector<double> weight_fwd(n);
    std::vector<double> weight_bwd(n);
    std::vector<double> i_nodes(n);

    double v = v0;
    double ln_y = 0.0;
    double m_sum = 0.0;
    double i_sum = 0.0;
    double xi_hat = x0;
    double xi_rho = x0;

    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(v) || !std::isfinite(ln_y)) {
            out.valid = false;
            return out;
        }
        const CoeffBundle cb = m.eval(v);
        const double y = std::exp(ln_y);
        if (keep_grids) {
            out.m_running[k] = m_sum;
            out.i_running[k] = i_sum;
        }
        i_nodes[k] = i_sum;
        weight_fwd[k] = cb.f_fprime * y;
        weight_bwd[k] = cb.f_eta / y;

        const double db1 = sq * z1[k];
        const double db2 = sq * z2[k];
        const double f = cb.f;
        const double drift = (r - 0.5 * f * f) * dt;

        m_sum += f * f * dt;
        i_sum += f * db1;
        out.v_int += f * db2;
        out.zint += db2 / f;
        out.inv_f2 += dt / (f * f);
        xi_hat += drift + f * db2;
        xi_rho += drift + f * (rho * db1 + rho_bar * db2);

        v += cb.mu * dt + cb.eta * db1;
        ln_y += (cb.mu_prime - 0.5 * cb.eta_prime * cb.eta_prime) * dt + cb.eta_prime * db1;
    }
    if (keep_grids) {
        out.m_running[n] = m_sum;
        out.i_running[n] = i_sum;
    }
    out.m_total = m_sum;
    out.u_int = i_sum;
    out.xi_hat_T = xi_hat;
    out.xi_T_rho = xi_rho;

    double suffix = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        suffix += weight_fwd[k] * dt;
        weight_bwd[k] *= suffix;  // now psi_k
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double psi_dt = weight_bwd[k] * dt;
        out.c_total += psi_dt;
        out.ell += psi_dt * i_nodes[k];
    }
    if (keep_grids) std::copy(weight_bwd.begin(), weight_bwd.end(), out.psi.begin());

    const double scalars[] = {out.m_total, out.c_total, out.ell,      out.u_int,   out.v_int,
                              out.zint,    out.inv_f2,  out.xi_hat_T, out.xi_T_rho};
    out.valid = std::all_of(std::begin(scalars), std::end(scalars),
                            [](double q) { return std::isfinite(q); }) &&
                out.m_total > 0.0;
    return out;
}

PathFunctionals simulate_path(const ModelSpec& m, const TimeGrid& grid, double x0, double v0,
                              double rho, RngStream rng, bool keep_grids) {
    grid.validate();
    const auto n = static_cast<std::size_t>(grid.n_steps);
    std::vector<double> z1(n);
    std::vector<double> z2(n);
    NormalSource normal(rng);
    for (std::size_t k = 0; k < n; ++k) {
        z1[k] = normal();
        z2[k] = normal();
    }
    return simulate_path_from_normals(m, grid, x0, v0, rho, z1, z2, keep_grids);
}

void simulate_terminal_log_prices(const ModelSpec& m, const TimeGrid& grid, double x0, double v0,
                                  std::span<const double> rhos, RngStream rng,
                                  std::span<double> out) {
    grid.validate();
    for (double rho : rhos) check_rho(rho);
    if (out.size() < rhos.size()) throw std::invalid_argument("output span too small");

    const double dt = grid.dt();
    const double sq = std::sqrt(dt);
    const double r = m.params().r;
    NormalSource normal(rng);

    // Per-path: accumulate the shared drift and the two stochastic integrals,
    // then combine per rho at the end.
    double v = v0;
    double drift = 0.0;
    double int1 = 0.0;
    double int2 = 0.0;
    for (int k = 0; k < grid.n_steps; ++k) {
        const double db1 = sq * normal();
        const double db2 = sq * normal();
        const double f = m.f(v);
        drift += (r - 0.5 * f * f) * dt;
        int1 += f * db1;
        int2 += f * db2;
        v += m.mu(v) * dt + m.eta(v) * db1;
    }
    const bool ok = std::isfinite(v) && std::isfinite(drift);
    for (std::size_t j = 0; j < rhos.size(); ++j) {
        const double rho = rhos[j];
        out[j] = ok ? x0 + drift + rho * int1 + std::sqrt(1.0 - rho * rho) * int2
                    : std::numeric_limits<double>::quiet_NaN();
    }
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

PathBatch simulate_batch(const ModelSpec& m, const TimeGrid& grid, double x0, double v0,
                         double rho, std::uint64_t seed, std::size_t n_paths, unsigned workers,
                         bool keep_grids) {
    if (n_paths < 1) throw std::invalid_argument("simulate_batch: n_paths must be >= 1");
    grid.validate();
    check_rho(rho);

    PathBatch batch;
    batch.seed = seed;
    batch.grid = grid;
    batch.paths.resize(n_paths);
    parallel_for(n_paths, workers, [&](std::size_t i) {
        batch.paths[i] = simulate_path(m, grid, x0, v0, rho, RngStream{seed, i}, keep_grids);
    });
    batch.n_invalid = static_cast<std::size_t>(
        std::count_if(batch.paths.begin(), batch.paths.end(),
                      [](const PathFunctionals& p) { return !p.valid; }));
    if (static_cast<double>(batch.n_invalid) > kMaxInvalidFraction * static_cast<double>(n_paths))
        throw std::runtime_error("simulate_batch: " + std::to_string(batch.n_invalid) + " of " +
                                 std::to_string(n_paths) + " paths invalid (limit 1%)");
    return batch;
}

}  // namespace svseries
