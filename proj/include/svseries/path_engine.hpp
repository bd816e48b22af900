#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "svseries/models.hpp"

namespace svseries {

/// Uniform grid on [t, T].
struct TimeGrid {
    double t = 0.0;
    double T = 1.0;
    int n_steps = 500;

    double dt() const { return (T - t) / n_steps; }
    double duration() const { return T - t; }
    void validate() const;
};

/// Identifies one independent Gaussian stream: path `stream_id` of run `seed`.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// Standard normal draws for one RngStream. The same (seed, stream_id) pair
/// always reproduces the same sequence.
class NormalSource {
public:
    explicit NormalSource(RngStream stream);
    double operator()() { return dist_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> dist_;
};

/// Everything a single simulated path contributes to the estimators.
/// Grid members are empty when the path was simulated without grids.
struct PathFunctionals {
    double m_total = 0.0;   ///< <M>_{[t,T]} = int f(v)^2 ds
    double c_total = 0.0;   ///< c_{[t,T]} = int psi ds
    double ell = 0.0;       ///< int psi_s I_s ds
    double u_int = 0.0;     ///< U = int f dB1
    double v_int = 0.0;     ///< V = int f dB2
    double zint = 0.0;      ///< int (1/f) dB2
    double inv_f2 = 0.0;    ///< int f^{-2} ds
    double xi_hat_T = 0.0;  ///< terminal log price at rho = 0
    double xi_T_rho = 0.0;  ///< terminal log price at the simulated rho
    bool valid = true;

    std::vector<double> psi;        ///< psi at nodes 0..n-1
    std::vector<double> i_running;  ///< I at nodes 0..n, I_0 = 0
    std::vector<double> m_running;  ///< <M>_{[t,s]} at nodes 0..n
};

/// Euler step of (v, ln Y, xi) driven by given standard normals z1, z2
/// (one pair per step; Brownian increments are sqrt(dt) z). Itô integrals
/// are left-point sums on the same increments; psi comes from a backward
/// suffix sum after the forward pass.
PathFunctionals simulate_path_from_normals(const ModelSpec& m, const TimeGrid& grid, double x0,
                                           double v0, double rho, std::span<const double> z1,
                                           std::span<const double> z2, bool keep_grids = true);

PathFunctionals simulate_path(const ModelSpec& m, const TimeGrid& grid, double x0, double v0,
                              double rho, RngStream rng, bool keep_grids = true);

/// Terminal log prices of one path under several correlations at once, all
/// driven by the same increments. Entries are NaN if the path blew up.
void simulate_terminal_log_prices(const ModelSpec& m, const TimeGrid& grid, double x0, double v0,
                                  std::span<const double> rhos, RngStream rng,
                                  std::span<double> out);

struct PathBatch {
    std::uint64_t seed = 0;
    TimeGrid grid;
    std::vector<PathFunctionals> paths;
    std::size_t n_invalid = 0;

    std::size_t n_valid() const { return paths.size() - n_invalid; }
};

/// Largest tolerated share of invalid paths in a batch.
inline constexpr double kMaxInvalidFraction = 0.01;

/// Simulates paths 0..n_paths-1 with RngStream(seed, i). The result does not
/// depend on `workers`. Throws if more than 1% of paths are invalid.
PathBatch simulate_batch(const ModelSpec& m, const TimeGrid& grid, double x0, double v0,
                         double rho, std::uint64_t seed, std::size_t n_paths,
                         unsigned workers = 1, bool keep_grids = true);

/// Runs fn(i) for i in [0, n) over `workers` threads in contiguous chunks.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

/// Worker count to use when the caller passes 0.
unsigned default_workers();

}  // namespace svseries
