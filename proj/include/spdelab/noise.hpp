#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "spdelab/time_grid.hpp"

namespace spdelab {

/// Distribution of one stochastic increment; all three have mean 0,
/// variance tau, and p-th moments of order tau^{p/2}.
enum class IncrementKind {
    Rademacher,     ///< +-sqrt(tau), probability 1/2 each
    UniformScaled,  ///< uniform on [-sqrt(3 tau), +sqrt(3 tau)]
    Gaussian,       ///< N(0, tau)
};

const char* to_string(IncrementKind kind);
IncrementKind increment_kind_from_string(const std::string& name);

/// One adapted increment stream xi^1..xi^N, reproducible from
/// (seed, stream_id, kind, grid).
struct IncrementPath {
    IncrementKind kind = IncrementKind::Rademacher;
    TimeGrid grid{1.0, 0};
    std::vector<double> values;  ///< values[n-1] = xi^n, n = 1..N
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    double xi(int n) const { return values.at(n - 1); }
};

/// Draw an i.i.d. increment stream. Distinct stream ids are independent;
/// identical inputs reproduce identical values bit-for-bit.
IncrementPath gen_increments(IncrementKind kind, const TimeGrid& grid,
                             std::uint64_t seed, std::uint64_t stream_id);

/// Rademacher stream with signs given by the bits of `mask` (bit n-1
/// drives xi^n); backs the exhaustive enumeration mode, which visits
/// all 2^N masks with equal weight.
IncrementPath rademacher_from_mask(const TimeGrid& grid, std::uint64_t mask);

/// Levels of a discrete Ito integral X^0..X^N in R^d, X^0 = 0.
struct ItoPath {
    TimeGrid grid;
    std::vector<Eigen::VectorXd> levels;  ///< N+1 entries
    int integrand_dim = 1;

    const Eigen::VectorXd& level(int n) const { return levels.at(n); }
};

/// Running sums W^n = sum_{m<=n} xi^m as a scalar ItoPath.
ItoPath discrete_wiener(const IncrementPath& incs);

/// X^n = sum_{m<=n} g^{m-1} xi^m. The integrand g must have exactly N
/// entries; entry m-1 is paired with increment m, which keeps the
/// integrand predictable by construction.
ItoPath discrete_ito(const std::vector<Eigen::VectorXd>& g, const IncrementPath& incs);

/// <X^n>(u,v) = sum_{m<=n} tau (g^{m-1},u)(g^{m-1},v).
double quadratic_variation(const std::vector<Eigen::VectorXd>& g, const TimeGrid& grid,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& v, int n);

}  // namespace spdelab
