#include "spdelab/harmonic.hpp"

#include <cmath>
#include <stdexcept>

namespace spdelab {

namespace {

Eigen::MatrixXd nodal_cross_matrix(const P1NeumannVec3Space& space,
                                   const Eigen::Vector3d& g) {
    Eigen::Matrix3d skew;
    // v x g as a matrix acting on v
    skew << 0.0, g(2), -g(1),
            -g(2), 0.0, g(0),
            g(1), -g(0), 0.0;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(space.dim(), space.dim());
    for (int j = 0; j < space.nodes(); ++j) out.block<3, 3>(3 * j, 3 * j) = skew;
    return out;
}

}  // namespace

HarmonicStepper::HarmonicStepper(const PenaltyFlowProblem& problem, const TimeGrid& grid)
    : problem_(&problem), grid_(grid) {
    const auto* space = problem.space;
    if (space == nullptr) throw std::invalid_argument("HarmonicStepper: missing space");
    if (!(problem.epsilon > 0.0))
        throw std::invalid_argument("HarmonicStepper: epsilon must be > 0");
    if (!problem.gamma.allFinite())
        throw std::invalid_argument("HarmonicStepper: gamma must be finite");
    if (problem.u0.size() != space->dim())
        throw std::invalid_argument("HarmonicStepper: u0 length != space dim");
    cross_matrix_ = nodal_cross_matrix(*space, problem.gamma);

    const CoeffVec zero = CoeffVec::Zero(space->dim());
    f_loads_.assign(grid.N(), zero);
    if (problem.f) {
        for (int n = 1; n <= grid.N(); ++n) {
            const double t0 = grid.time(n - 1), t1 = grid.time(n);
            f_loads_[n - 1] = space->load([&](double x) -> Eigen::Vector3d {
                Eigen::Vector3d acc = Eigen::Vector3d::Zero();
                const GaussRule rule = GaussRule::of_order(8);
                const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    acc += rule.weights[i] * problem.f(mid + half * rule.nodes[i], x);
                }
                return 0.5 * acc;  // half / tau = 1/2
            });
        }
    }
}

double HarmonicStepper::energy(const CoeffVec& u) const {
    const auto& space = *problem_->space;
    return 0.5 * u.dot(space.stiffness() * u) + space.penalty_energy(u, problem_->epsilon);
}

HarmonicStepResult HarmonicStepper::step(const CoeffVec& u_prev, const CoeffVec& f_n,
                                         double xi_n) const {
    const auto& space = *problem_->space;
    const auto& set = problem_->newton;
    const auto& M = space.mass();
    const auto& K = space.stiffness();
    const double tau = grid_.tau();
    const double eps = problem_->epsilon;

    const auto residual = [&](const CoeffVec& u) -> CoeffVec {
        const CoeffVec mid_cross = cross_matrix_ * (0.5 * (u + u_prev));
        return M * (u - u_prev) + tau * (K * u + space.penalty_load(u, u_prev, eps)) -
               tau * f_n - (M * mid_cross) * xi_n;
    };

    // explicit noise push as the initial guess
    CoeffVec u = u_prev + (cross_matrix_ * u_prev) * xi_n;
    CoeffVec res = residual(u);
    double rnorm = res.norm();
    int iters = 0;

    for (; iters < set.max_iterations && rnorm > set.tolerance; ++iters) {
        Eigen::MatrixXd jac = M + tau * K + tau * space.penalty_jacobian(u, u_prev, eps) -
                              (0.5 * xi_n) * (M * cross_matrix_);
        const CoeffVec dir = jac.partialPivLu().solve(-res);
        double alpha = 1.0;
        bool accepted = false;
        for (int h = 0; h <= set.max_halvings; ++h) {
            const CoeffVec trial = u + alpha * dir;
            const CoeffVec tres = residual(trial);
            if (tres.norm() < rnorm) {
                u = trial;
                res = tres;
                rnorm = tres.norm();
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
    }
    if (rnorm > set.tolerance) {
        throw NonConvergence("harmonic_step: Newton did not reach tolerance", rnorm, iters);
    }

    HarmonicStepResult out;
    out.u = u;
    out.a = space.mass_llt().solve(K * u + space.penalty_load(u, u_prev, eps));
    out.diag.iterations = iters;
    out.diag.residual = rnorm;
    return out;
}

HarmonicTrajectory HarmonicStepper::run_path(const IncrementPath& noise) const {
    if (!(noise.grid == grid_)) throw std::invalid_argument("harmonic run_path: grid mismatch");
    HarmonicTrajectory traj;
    traj.grid = grid_;
    traj.noise = noise;
    traj.levels.resize(grid_.N() + 1);
    traj.levels[0] = problem_->u0;
    traj.a_levels.resize(grid_.N());
    traj.diagnostics.resize(grid_.N());
    for (int n = 1; n <= grid_.N(); ++n) {
        try {
            HarmonicStepResult r = step(traj.levels[n - 1], f_loads_[n - 1], noise.xi(n));
            traj.levels[n] = std::move(r.u);
            traj.a_levels[n - 1] = std::move(r.a);
            traj.diagnostics[n - 1] = r.diag;
        } catch (NonConvergence& e) {
            e.step = n;
            throw;
        }
    }
    return traj;
}

std::vector<double> harmonic_energy_check(const HarmonicStepper& stepper,
                                          const HarmonicTrajectory& traj) {
    const auto& problem = stepper.problem();
    const auto& space = *problem.space;
    const auto& M = space.mass();
    const auto& K = space.stiffness();
    const double tau = stepper.grid().tau();
    const int N = stepper.grid().N();

    std::vector<double> residuals(N);
    for (int n = 1; n <= N; ++n) {
        const auto& u = traj.levels[n];
        const auto& up = traj.levels[n - 1];
        const auto& a = traj.a_levels[n - 1];
        const CoeffVec du = u - up;
        const CoeffVec mid_cross = space.nodal_cross(0.5 * (u + up), problem.gamma);
        const double lhs = 0.5 * u.dot(K * u) + space.penalty_energy(u, problem.epsilon) +
                           0.5 * du.dot(K * du) + tau * a.dot(M * a);
        const double rhs = 0.5 * up.dot(K * up) + space.penalty_energy(up, problem.epsilon) +
                           tau * stepper.f_loads()[n - 1].dot(a) +
                           u.dot(K * mid_cross) * traj.noise.xi(n);
        residuals[n - 1] = lhs - rhs;
    }
    return residuals;
}

double chain_rule_check(const P1NeumannVec3Space& space, const CoeffVec& u_prev,
                        const CoeffVec& u_n, double epsilon) {
    const CoeffVec load = space.penalty_load(u_n, u_prev, epsilon);
    const double lhs = load.dot(u_n - u_prev);
    const double phi_n = space.penalty_energy(u_n, epsilon);
    const double phi_p = space.penalty_energy(u_prev, epsilon);
    return std::abs(lhs - phi_n + phi_p) / std::max(1.0, std::abs(phi_n) + std::abs(phi_p));
}

OrthogonalityReport orthogonality_checks(const P1NeumannVec3Space& space,
                                         const CoeffVec& u_prev, const CoeffVec& u_n,
                                         const Eigen::Vector3d& gamma) {
    OrthogonalityReport rep{0.0, 0.0};
    const GaussRule rule = GaussRule::of_order(5);
    const double gn = gamma.norm();
    for (int k = 0; k < space.cells(); ++k) {
        const double x0 = space.xmin() + k * space.h();
        const double mid = x0 + 0.5 * space.h(), half = 0.5 * space.h();
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = mid + half * rule.nodes[i];
            const Eigen::Vector3d v = 0.5 * (space.eval(u_n, x) + space.eval(u_prev, x));
            const double triple = v.dot(v.cross(gamma));
            rep.max_penalty_pairing = std::max(
                rep.max_penalty_pairing, std::abs(triple) / std::max(1.0, v.squaredNorm() * gn));
        }
        // gradients are constant per cell; grad(u x gamma) = (grad u) x gamma
        const Eigen::Vector3d g = space.cell_gradient(u_n, k);
        const double triple = g.dot(g.cross(gamma));
        rep.max_gradient_pairing = std::max(
            rep.max_gradient_pairing, std::abs(triple) / std::max(1.0, g.squaredNorm() * gn));
    }
    return rep;
}

StratonovichReport stratonovich_monitor(const HarmonicStepper& stepper,
                                        const HarmonicTrajectory& traj) {
    const auto& problem = stepper.problem();
    const auto& space = *problem.space;
    const double tau = stepper.grid().tau();
    const int N = stepper.grid().N();

    StratonovichReport rep;
    rep.f2_h_norms.resize(N);
    CoeffVec aggregate = CoeffVec::Zero(space.dim());
    CoeffVec drift = CoeffVec::Zero(space.dim());
    double l43 = 0.0;
    Eigen::Vector3d max_mean = Eigen::Vector3d::Zero();
    for (int n = 1; n <= N; ++n) {
        const CoeffVec du = traj.levels[n] - traj.levels[n - 1];
        const CoeffVec f2 = space.nodal_cross(du, problem.gamma) * (traj.noise.xi(n) / (2.0 * tau));
        rep.f2_h_norms[n - 1] = space.h_norm(f2);
        l43 += tau * std::pow(rep.f2_h_norms[n - 1], 4.0 / 3.0);
        aggregate += tau * f2;
        drift += 0.5 * tau *
                 space.nodal_cross(space.nodal_cross(traj.levels[n], problem.gamma),
                                   problem.gamma);
        const Eigen::Vector3d mean = space.mean_value(traj.levels[n]).cwiseAbs();
        max_mean = max_mean.cwiseMax(mean);
    }
    rep.l43_time_norm = std::pow(l43, 0.75);
    rep.drift_distance = space.h_norm(aggregate - drift);
    rep.max_mean_value = max_mean;
    return rep;
}

}  // namespace spdelab
