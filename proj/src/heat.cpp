#include "spdelab/heat.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spdelab/rng.hpp"

namespace spdelab {

double EnergyLedger::max_relative_residual() const {
    double worst = 0.0;
    for (std::size_t n = 0; n < residual.size(); ++n) {
        worst = std::max(worst, std::abs(residual[n]) / std::max(1.0, h_sq[n]));
    }
    return worst;
}

double LinearParabolicProblem::estimate_coercivity(int samples, std::uint64_t seed) const {
    const auto& M = space->mass();
    const auto& K = space->stiffness();
    double c_a = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        CoeffVec v(space->dim());
        for (int i = 0; i < v.size(); ++i) {
            v(i) = 2.0 * rng::uniform01(rng::word(seed, 77, s, i)) - 1.0;
        }
        const double num = v.dot(K * v);
        const double den = v.dot((K + M) * v);
        if (den > 0.0) c_a = std::min(c_a, num / den);
    }
    return c_a;
}

HeatStepper::HeatStepper(const LinearParabolicProblem& problem, const TimeGrid& grid)
    : problem_(&problem), grid_(grid) {
    const auto* space = problem.space;
    if (space == nullptr) throw std::invalid_argument("HeatStepper: missing space");
    if (problem.u0.size() != space->dim())
        throw std::invalid_argument("HeatStepper: u0 length != space dim");
    system_llt_.compute(space->mass() + grid.tau() * space->stiffness());
    if (system_llt_.info() != Eigen::Success)
        throw std::runtime_error("HeatStepper: factorization failure (non-SPD assembly)");

    const CoeffVec zero = CoeffVec::Zero(space->dim());
    f_loads_.assign(grid.N(), zero);
    g_coeffs_.assign(grid.N(), zero);
    for (int n = 1; n <= grid.N(); ++n) {
        const double t0 = grid.time(n - 1), t1 = grid.time(n);
        if (problem.f) {
            f_loads_[n - 1] = space->load([&](double x) {
                return gauss_integrate([&](double t) { return problem.f(t, x); }, t0, t1, 8) /
                       grid.tau();
            });
        }
        if (problem.g) {
            g_coeffs_[n - 1] = space->l2_project([&](double x) {
                return gauss_integrate([&](double t) { return problem.g(t, x); }, t0, t1, 8) /
                       grid.tau();
            });
        }
    }
}

CoeffVec HeatStepper::step(const CoeffVec& u_prev, const CoeffVec& f_n, const CoeffVec& g_prev,
                           double xi_n) const {
    const auto& M = problem_->space->mass();
    const CoeffVec rhs = M * u_prev + grid_.tau() * f_n + (M * g_prev) * xi_n;
    return system_llt_.solve(rhs);
}

TrajectoryRecord heat_run_path(const HeatStepper& stepper, const IncrementPath& noise) {
    const auto& grid = stepper.grid();
    if (!(noise.grid == grid)) throw std::invalid_argument("heat_run_path: grid mismatch");
    const auto& problem = stepper.problem();

    TrajectoryRecord rec;
    rec.grid = grid;
    rec.noise = noise;
    rec.levels.resize(grid.N() + 1);
    rec.levels[0] = problem.u0;
    rec.diagnostics.assign(grid.N(), StepDiagnostics{1, 0.0});
    for (int n = 1; n <= grid.N(); ++n) {
        rec.levels[n] = stepper.step(rec.levels[n - 1], stepper.f_loads()[n - 1],
                                     stepper.g_coeffs()[n - 1], noise.xi(n));
    }
    rec.ledger = energy_ledger(*problem.space, problem.space->stiffness(), rec.levels,
                               stepper.f_loads(), stepper.g_coeffs(), noise);
    return rec;
}

EnergyLedger energy_ledger(const GalerkinSpace& space, const Eigen::MatrixXd& a_matrix,
                           const std::vector<Eigen::VectorXd>& levels,
                           const std::vector<CoeffVec>& f_loads,
                           const std::vector<CoeffVec>& g_coeffs, const IncrementPath& noise) {
    const int N = noise.grid.N();
    const double tau = noise.grid.tau();
    const auto& M = space.mass();
    EnergyLedger led;
    led.h_sq.resize(N + 1);
    led.inc_sq.resize(N);
    led.diss.resize(N);
    led.work.resize(N);
    led.stoch.resize(N);
    led.residual.resize(N);
    led.h_sq[0] = levels[0].dot(M * levels[0]);
    for (int n = 1; n <= N; ++n) {
        const auto& u = levels[n];
        const Eigen::VectorXd du = u - levels[n - 1];
        led.h_sq[n] = u.dot(M * u);
        led.inc_sq[n - 1] = du.dot(M * du);
        led.diss[n - 1] = 2.0 * tau * u.dot(a_matrix * u);
        led.work[n - 1] = 2.0 * tau * f_loads[n - 1].dot(u);
        led.stoch[n - 1] = 2.0 * (M * g_coeffs[n - 1]).dot(u) * noise.xi(n);
        led.residual[n - 1] = led.h_sq[n] + led.inc_sq[n - 1] + led.diss[n - 1] -
                              led.h_sq[n - 1] - led.work[n - 1] - led.stoch[n - 1];
    }
    return led;
}

}  // namespace spdelab
