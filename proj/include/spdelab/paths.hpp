#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "spdelab/time_grid.hpp"

namespace spdelab {

/// Norm used on path levels; plug in euclidean_norm() or a space norm.
using NormFn = std::function<double(const Eigen::VectorXd&)>;

NormFn euclidean_norm();

/// Piecewise constant caglad interpolant: eval(0) = u^0 and
/// eval(t) = u^n on (t^{n-1}, t^n].
struct StepPath {
    TimeGrid grid;
    std::vector<Eigen::VectorXd> levels;  ///< N+1 entries

    Eigen::VectorXd eval(double t) const;
};

/// Piecewise affine interpolant through (t^n, u^n).
struct PolyPath {
    TimeGrid grid;
    std::vector<Eigen::VectorXd> levels;  ///< N+1 entries

    Eigen::VectorXd eval(double t) const;
};

/// Grid Hoelder seminorm: max over breakpoint pairs s < t of
/// ||u(t)-u(s)|| / (t-s)^theta. Exact within a single affine segment and
/// a lower bound of the continuum seminorm across segments.
double holder_seminorm(const PolyPath& path, double theta, const NormFn& norm);

/// Integral_delta^T ||u(t) - u(t-delta)||^p dt by composite Gauss
/// quadrature on the sub-partition induced by both breakpoint lattices.
/// Relative accuracy ~1e-10 for the norms used here.
double translate_moment(const PolyPath& path, double delta, double p, const NormFn& norm);

struct SkorokhodOptions {
    int knot_budget = 4096;  ///< cap on candidate reparameterizations
    NormFn norm;             ///< defaults to euclidean
};

/// Certified upper bound of the Skorokhod-type distance
/// d_G(u,v) = inf_lambda max(gamma(lambda), sup|u - v o lambda|) with
/// gamma(lambda) = sup |ln((lambda(t)-lambda(s))/(t-s))|. The candidate
/// family is the identity plus one-knot piecewise-linear maps, minimized
/// exactly over the knot position. Always >= d_G and <= ||u-v||_inf.
double skorokhod_ub(const StepPath& u, const StepPath& v, const SkorokhodOptions& opts = {});

}  // namespace spdelab
