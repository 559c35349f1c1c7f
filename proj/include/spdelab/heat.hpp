#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "spdelab/galerkin.hpp"
#include "spdelab/trajectory.hpp"

namespace spdelab {

/// Linear stochastic heat problem with additive noise:
///   (u^n - u^{n-1}, v) + tau a(u^n, v) = tau (f^n, v) + (g^{n-1}, v) xi^n.
/// f and g are scalar space-time fields (t, x); g enters through its
/// per-window time average projected onto the space and indexed one step
/// behind the increment it multiplies.
struct LinearParabolicProblem {
    const Scalar1DSpace* space = nullptr;
    std::function<double(double, double)> f;  ///< f(t, x); empty means 0
    std::function<double(double, double)> g;  ///< g(t, x); empty means 0
    CoeffVec u0;

    /// Coercivity constant of a(u,u) >= c_a ||u||_U^2, estimated by a
    /// generalized Rayleigh quotient over random vectors (reported, not
    /// assumed).
    double estimate_coercivity(int samples = 100, std::uint64_t seed = 0) const;
};

/// Shared per-(problem, tau) context: one SPD factorization of M + tau K
/// reused by every step of every path.
class HeatStepper {
public:
    HeatStepper(const LinearParabolicProblem& problem, const TimeGrid& grid);

    /// Solves (M + tau K) c = M c_prev + tau f_n + (M g_prev) xi_n.
    CoeffVec step(const CoeffVec& u_prev, const CoeffVec& f_n, const CoeffVec& g_prev,
                  double xi_n) const;

    const TimeGrid& grid() const { return grid_; }
    /// Precomputed per-step data: f^n as load vectors, g^{n-1} projected.
    const std::vector<CoeffVec>& f_loads() const { return f_loads_; }
    const std::vector<CoeffVec>& g_coeffs() const { return g_coeffs_; }

    const LinearParabolicProblem& problem() const { return *problem_; }

private:
    const LinearParabolicProblem* problem_;
    TimeGrid grid_;
    Eigen::LLT<Eigen::MatrixXd> system_llt_;
    std::vector<CoeffVec> f_loads_;   ///< entry n-1 = load of (1/tau) int f over window n
    std::vector<CoeffVec> g_coeffs_;  ///< entry n-1 = projected window-n average of g
};

/// Run one path and fill the energy ledger.
TrajectoryRecord heat_run_path(const HeatStepper& stepper, const IncrementPath& noise);

/// Energy ledger of an externally produced level sequence (also used by
/// the Navier-Stokes checks, where the viscous matrix plays K).
EnergyLedger energy_ledger(const GalerkinSpace& space, const Eigen::MatrixXd& a_matrix,
                           const std::vector<Eigen::VectorXd>& levels,
                           const std::vector<CoeffVec>& f_loads,
                           const std::vector<CoeffVec>& g_coeffs, const IncrementPath& noise);

}  // namespace spdelab
