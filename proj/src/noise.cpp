#include "spdelab/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "spdelab/rng.hpp"

namespace spdelab {

const char* to_string(IncrementKind kind) {
    switch (kind) {
        case IncrementKind::Rademacher: return "rademacher";
        case IncrementKind::UniformScaled: return "uniform_scaled";
        case IncrementKind::Gaussian: return "gaussian";
    }
    return "?";
}

IncrementKind increment_kind_from_string(const std::string& name) {
    if (name == "rademacher") return IncrementKind::Rademacher;
    if (name == "uniform_scaled") return IncrementKind::UniformScaled;
    if (name == "gaussian") return IncrementKind::Gaussian;
    throw std::invalid_argument("unknown increment kind: " + name);
}

IncrementPath gen_increments(IncrementKind kind, const TimeGrid& grid,
                             std::uint64_t seed, std::uint64_t stream_id) {
    if (grid.N() == 0) throw std::invalid_argument("gen_increments: N = 0");
    const double tau = grid.tau();
    const double root_tau = std::sqrt(tau);
    IncrementPath path{kind, grid, {}, seed, stream_id};
    path.values.resize(grid.N());
    for (int n = 1; n <= grid.N(); ++n) {
        const std::uint64_t w0 = rng::word(seed, stream_id, static_cast<std::uint64_t>(n), 0);
        switch (kind) {
            case IncrementKind::Rademacher:
                path.values[n - 1] = (w0 >> 63) ? root_tau : -root_tau;
                break;
            case IncrementKind::UniformScaled:
                path.values[n - 1] = std::sqrt(12.0 * tau) * (rng::uniform01(w0) - 0.5);
                break;
            case IncrementKind::Gaussian: {
                const std::uint64_t w1 =
                    rng::word(seed, stream_id, static_cast<std::uint64_t>(n), 1);
                path.values[n - 1] = root_tau * rng::standard_normal(w0, w1);
                break;
            }
        }
    }
    return path;
}

IncrementPath rademacher_from_mask(const TimeGrid& grid, std::uint64_t mask) {
    if (grid.N() > 62) throw std::invalid_argument("rademacher_from_mask: N too large");
    const double root_tau = std::sqrt(grid.tau());
    IncrementPath path{IncrementKind::Rademacher, grid, {}, 0, mask};
    path.values.resize(grid.N());
    for (int n = 1; n <= grid.N(); ++n) {
        path.values[n - 1] = (mask >> (n - 1)) & 1 ? root_tau : -root_tau;
    }
    return path;
}

ItoPath discrete_wiener(const IncrementPath& incs) {
    ItoPath out{incs.grid, {}, 1};
    out.levels.resize(incs.grid.N() + 1, Eigen::VectorXd::Zero(1));
    double acc = 0.0;
    for (int n = 1; n <= incs.grid.N(); ++n) {
        acc += incs.xi(n);
        out.levels[n](0) = acc;
    }
    return out;
}

ItoPath discrete_ito(const std::vector<Eigen::VectorXd>& g, const IncrementPath& incs) {
    const int N = incs.grid.N();
    if (static_cast<int>(g.size()) != N)
        throw std::invalid_argument("discrete_ito: integrand must have N entries");
    const int d = N > 0 ? static_cast<int>(g[0].size()) : 1;
    for (const auto& gm : g) {
        if (gm.size() != d) throw std::invalid_argument("discrete_ito: ragged integrand");
    }
    ItoPath out{incs.grid, {}, d};
    out.levels.resize(N + 1, Eigen::VectorXd::Zero(d));
    for (int n = 1; n <= N; ++n) {
        out.levels[n] = out.levels[n - 1] + g[n - 1] * incs.xi(n);
    }
    return out;
}

double quadratic_variation(const std::vector<Eigen::VectorXd>& g, const TimeGrid& grid,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& v, int n) {
    if (n < 0 || n > grid.N()) throw std::out_of_range("quadratic_variation: step index");
    if (static_cast<int>(g.size()) < n)
        throw std::invalid_argument("quadratic_variation: integrand too short");
    double acc = 0.0;
    for (int m = 1; m <= n; ++m) {
        if (g[m - 1].size() != u.size() || g[m - 1].size() != v.size())
            throw std::invalid_argument("quadratic_variation: dimension mismatch");
        acc += grid.tau() * g[m - 1].dot(u) * g[m - 1].dot(v);
    }
    return acc;
}

}  // namespace spdelab
