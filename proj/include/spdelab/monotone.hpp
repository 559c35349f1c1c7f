#pragma once

#include <Eigen/Dense>
#include <functional>

#include "spdelab/galerkin.hpp"
#include "spdelab/trajectory.hpp"

namespace spdelab {

/// Implicit Euler for du + A_q(u) dt = f dt + g dW with the q-Laplacian
/// on a 1D P1 Dirichlet space.
struct MonotoneProblem {
    const P1DirichletSpace* space = nullptr;
    double q = 2.0;
    std::function<double(double, double)> f;  ///< f(t, x); empty means 0
    std::function<double(double, double)> g;  ///< g(t, x); empty means 0
    CoeffVec u0;
    NewtonSettings newton;
};

/// Residual of the step equation at u:
///   M (u - u_prev) + tau A_q(u) - tau f_n - (M g_prev) xi_n.
CoeffVec qlap_residual(const MonotoneProblem& problem, double tau, const CoeffVec& u,
                       const CoeffVec& u_prev, const CoeffVec& f_n, const CoeffVec& g_prev,
                       double xi_n);

/// Damped Newton with analytic Jacobian and Picard fallback; throws
/// NonConvergence if the tolerance is not reached.
CoeffVec qlap_step(const MonotoneProblem& problem, double tau, const CoeffVec& u_prev,
                   const CoeffVec& f_n, const CoeffVec& g_prev, double xi_n,
                   StepDiagnostics* diag = nullptr);

/// Per-(problem, grid) data mirroring HeatStepper.
class QlapStepper {
public:
    QlapStepper(const MonotoneProblem& problem, const TimeGrid& grid);
    const std::vector<CoeffVec>& f_loads() const { return f_loads_; }
    const std::vector<CoeffVec>& g_coeffs() const { return g_coeffs_; }
    const TimeGrid& grid() const { return grid_; }
    const MonotoneProblem& problem() const { return *problem_; }

    TrajectoryRecord run_path(const IncrementPath& noise) const;

private:
    const MonotoneProblem* problem_;
    TimeGrid grid_;
    std::vector<CoeffVec> f_loads_;
    std::vector<CoeffVec> g_coeffs_;
};

/// Monotonicity / coercivity / growth report over random pairs.
struct MonotoneReport {
    double min_monotone_gap;    ///< min (A(v)-A(u), v-u)
    double min_coercivity;      ///< min (A(u),u) / ||u'||_q^q  (1 exactly for P1)
    double max_growth_ratio;    ///< max ||A(u)||_{U_h'} / (1 + ||u||_U^{q-1})
    int samples;
    bool pass(double gap_floor = -1e-12) const { return min_monotone_gap >= gap_floor; }
};

MonotoneReport monotone_checks(const P1DirichletSpace& space, double q, int sample_count,
                               std::uint64_t seed = 2024);

/// Discrete energy balance (the test-function-u^n identity):
/// pathwise residual of
///   1/2||u^N||^2 + 1/2 sum ||du||^2 + sum tau (A(u^n), u^n)
///     = 1/2||u^0||^2 + sum tau (f^n, u^n) + sum (g^{n-1}, u^n) xi^n,
/// plus the expectation-level form with (g^{n-1}, u^n - u^{n-1}) xi^n on
/// the right and its Monte Carlo error.
struct ItoBalanceReport {
    double max_pathwise_residual;   ///< worst |lhs - rhs| over paths
    double expectation_gap;         ///< E[lhs] - E[rhs'] (martingale term dropped)
    double expectation_gap_se;      ///< standard error of the gap
    double max_martingale_mean;     ///< max_n |mean (g^{n-1},u^{n-1}) xi^n|
    double max_martingale_excess;   ///< max_n (|mean_n| - z SE_n); <= ~0 passes
    long paths;
};

ItoBalanceReport ito_balance(const QlapStepper& stepper,
                             const std::vector<TrajectoryRecord>& ensemble);

}  // namespace spdelab
