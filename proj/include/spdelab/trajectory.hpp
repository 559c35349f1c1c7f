#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdelab/noise.hpp"
#include "spdelab/paths.hpp"
#include "spdelab/time_grid.hpp"

namespace spdelab {

/// A per-step nonlinear solve did not reach its tolerance; never
/// silently accepted. Retry with smaller tau or stronger damping.
struct NonConvergence : std::runtime_error {
    double final_residual;
    int iterations;
    int step = -1;
    long path = -1;

    NonConvergence(const std::string& what, double residual, int iters)
        : std::runtime_error(what), final_residual(residual), iterations(iters) {}
};

/// Per-step terms of the energy identity
///   h_sq_n + inc_sq_n + diss_n = h_sq_{n-1} + work_n + stoch_n,
/// entries for n = 1..N.
struct EnergyLedger {
    std::vector<double> h_sq;    ///< ||u^n||_H^2 (entry 0 is ||u^0||^2; N+1 entries)
    std::vector<double> inc_sq;  ///< ||u^n - u^{n-1}||_H^2
    std::vector<double> diss;    ///< 2 tau a(u^n, u^n)
    std::vector<double> work;    ///< 2 tau (f^n, u^n)
    std::vector<double> stoch;   ///< 2 (g^{n-1}, u^n) xi^n
    std::vector<double> residual;

    double max_relative_residual() const;
};

/// Per-step solver diagnostics.
struct StepDiagnostics {
    int iterations = 0;
    double residual = 0.0;
};

/// Shared knobs for the per-step nonlinear solvers.
struct NewtonSettings {
    double tolerance = 1e-12;  ///< absolute, on the euclidean residual
    int max_iterations = 60;
    int max_halvings = 30;          ///< residual-norm line search
    int picard_iterations = 50;     ///< fallback with lagged weights
    double jacobian_delta = 1e-10;  ///< gradient smoothing inside Jacobians only
};

/// One solved sample path: levels u^0..u^N, the noise that produced it,
/// solver diagnostics, and the filled energy ledger.
struct TrajectoryRecord {
    TimeGrid grid{1.0, 0};
    std::vector<Eigen::VectorXd> levels;
    IncrementPath noise;
    std::vector<StepDiagnostics> diagnostics;
    EnergyLedger ledger;

    StepPath step_path() const { return StepPath{grid, levels}; }
    PolyPath poly_path() const { return PolyPath{grid, levels}; }
};

}  // namespace spdelab
