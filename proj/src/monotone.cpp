#include "spdelab/monotone.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spdelab/rng.hpp"
#include "spdelab/stats.hpp"

namespace spdelab {

CoeffVec qlap_residual(const MonotoneProblem& problem, double tau, const CoeffVec& u,
                       const CoeffVec& u_prev, const CoeffVec& f_n, const CoeffVec& g_prev,
                       double xi_n) {
    const auto& M = problem.space->mass();
    return M * (u - u_prev) + tau * problem.space->q_laplacian_apply(u, problem.q) -
           tau * f_n - (M * g_prev) * xi_n;
}

CoeffVec qlap_step(const MonotoneProblem& problem, double tau, const CoeffVec& u_prev,
                   const CoeffVec& f_n, const CoeffVec& g_prev, double xi_n,
                   StepDiagnostics* diag) {
    if (!(problem.q > 1.0)) throw std::invalid_argument("qlap_step: q must be > 1");
    const auto& space = *problem.space;
    const auto& set = problem.newton;
    const auto& M = space.mass();

    CoeffVec u = u_prev;
    CoeffVec res = qlap_residual(problem, tau, u, u_prev, f_n, g_prev, xi_n);
    double rnorm = res.norm();
    int iters = 0;

    for (; iters < set.max_iterations && rnorm > set.tolerance; ++iters) {
        const Eigen::MatrixXd jac =
            M + tau * space.q_laplacian_jacobian(u, problem.q, set.jacobian_delta);
        const CoeffVec dir = jac.partialPivLu().solve(-res);
        double alpha = 1.0;
        bool accepted = false;
        for (int h = 0; h <= set.max_halvings; ++h) {
            const CoeffVec trial = u + alpha * dir;
            const CoeffVec tres = qlap_residual(problem, tau, trial, u_prev, f_n, g_prev, xi_n);
            if (tres.norm() < rnorm) {
                u = trial;
                res = tres;
                rnorm = tres.norm();
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;  // stagnated; fall through to Picard
    }

    // Picard fallback: lagged |u'|^{q-2} weights solve a linear problem
    for (int p = 0; rnorm > set.tolerance && p < set.picard_iterations; ++p, ++iters) {
        Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(space.dim(), space.dim());
        for (int k = 0; k < space.cells(); ++k) {
            const double du = space.cell_gradient(u, k);
            const double w = std::pow(du * du + set.jacobian_delta * set.jacobian_delta,
                                      0.5 * (problem.q - 2.0));
            const double e = w / space.h();
            const int i = k, j = k - 1;
            const int n = space.dim();
            if (i < n) weighted(i, i) += e;
            if (j >= 0) weighted(j, j) += e;
            if (i < n && j >= 0) {
                weighted(i, j) -= e;
                weighted(j, i) -= e;
            }
        }
        const CoeffVec rhs = M * u_prev + tau * f_n + (M * g_prev) * xi_n;
        u = (M + tau * weighted).partialPivLu().solve(rhs);
        res = qlap_residual(problem, tau, u, u_prev, f_n, g_prev, xi_n);
        rnorm = res.norm();
    }

    if (diag != nullptr) {
        diag->iterations = iters;
        diag->residual = rnorm;
    }
    if (rnorm > set.tolerance) {
        throw NonConvergence("qlap_step: Newton did not reach tolerance", rnorm, iters);
    }
    return u;
}

QlapStepper::QlapStepper(const MonotoneProblem& problem, const TimeGrid& grid)
    : problem_(&problem), grid_(grid) {
    const auto* space = problem.space;
    if (space == nullptr) throw std::invalid_argument("QlapStepper: missing space");
    if (problem.u0.size() != space->dim())
        throw std::invalid_argument("QlapStepper: u0 length != space dim");
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

TrajectoryRecord QlapStepper::run_path(const IncrementPath& noise) const {
    if (!(noise.grid == grid_)) throw std::invalid_argument("qlap run_path: grid mismatch");
    TrajectoryRecord rec;
    rec.grid = grid_;
    rec.noise = noise;
    rec.levels.resize(grid_.N() + 1);
    rec.levels[0] = problem_->u0;
    rec.diagnostics.assign(grid_.N(), StepDiagnostics{});
    for (int n = 1; n <= grid_.N(); ++n) {
        try {
            rec.levels[n] =
                qlap_step(*problem_, grid_.tau(), rec.levels[n - 1], f_loads_[n - 1],
                          g_coeffs_[n - 1], noise.xi(n), &rec.diagnostics[n - 1]);
        } catch (NonConvergence& e) {
            e.step = n;
            throw;
        }
    }
    return rec;
}

MonotoneReport monotone_checks(const P1DirichletSpace& space, double q, int sample_count,
                               std::uint64_t seed) {
    if (sample_count < 1) throw std::invalid_argument("monotone_checks: sample_count >= 1");
    MonotoneReport rep{};
    rep.samples = sample_count;
    rep.min_monotone_gap = std::numeric_limits<double>::infinity();
    rep.min_coercivity = std::numeric_limits<double>::infinity();
    rep.max_growth_ratio = 0.0;

    const auto random_vec = [&](int s, int which) {
        CoeffVec v(space.dim());
        for (int i = 0; i < v.size(); ++i) {
            v(i) = 2.0 * rng::uniform01(rng::word(seed, which, s, i)) - 1.0;
        }
        return v;
    };

    for (int s = 0; s < sample_count; ++s) {
        const CoeffVec u = random_vec(s, 1);
        const CoeffVec v = random_vec(s, 2);
        const CoeffVec au = space.q_laplacian_apply(u, q);
        const CoeffVec av = space.q_laplacian_apply(v, q);
        rep.min_monotone_gap = std::min(rep.min_monotone_gap, (av - au).dot(v - u));

        const double pairing = au.dot(u);
        const double gq = space.gradient_q_norm_pow(u, q);
        if (gq > 0.0) rep.min_coercivity = std::min(rep.min_coercivity, pairing / gq);

        const double growth = space.dual_norm_of_load(au) /
                              (1.0 + std::pow(space.u_norm(u), q - 1.0));
        rep.max_growth_ratio = std::max(rep.max_growth_ratio, growth);
    }
    return rep;
}

ItoBalanceReport ito_balance(const QlapStepper& stepper,
                             const std::vector<TrajectoryRecord>& ensemble) {
    if (ensemble.empty()) throw std::invalid_argument("ito_balance: empty ensemble");
    const auto& problem = stepper.problem();
    const auto& space = *problem.space;
    const auto& M = space.mass();
    const int N = stepper.grid().N();
    const double tau = stepper.grid().tau();

    ItoBalanceReport rep{};
    rep.paths = static_cast<long>(ensemble.size());
    std::vector<double> gaps;  // expectation-form per-path values
    gaps.reserve(ensemble.size());
    std::vector<std::vector<double>> mgl(N);  // per-step martingale samples

    for (const auto& rec : ensemble) {
        double lhs = 0.5 * rec.levels[N].dot(M * rec.levels[N]);
        double rhs_path = 0.5 * rec.levels[0].dot(M * rec.levels[0]);
        double rhs_exp = rhs_path;
        for (int n = 1; n <= N; ++n) {
            const auto& u = rec.levels[n];
            const Eigen::VectorXd du = u - rec.levels[n - 1];
            lhs += 0.5 * du.dot(M * du);
            lhs += tau * space.q_laplacian_apply(u, problem.q).dot(u);
            const double work = tau * stepper.f_loads()[n - 1].dot(u);
            const CoeffVec mg = M * stepper.g_coeffs()[n - 1];
            rhs_path += work + mg.dot(u) * rec.noise.xi(n);
            rhs_exp += work + mg.dot(du) * rec.noise.xi(n);
            mgl[n - 1].push_back(mg.dot(rec.levels[n - 1]) * rec.noise.xi(n));
        }
        rep.max_pathwise_residual = std::max(rep.max_pathwise_residual,
                                             std::abs(lhs - rhs_path));
        gaps.push_back(lhs - rhs_exp);
    }

    const McEstimate est = McEstimate::from_samples(gaps);
    rep.expectation_gap = est.mean;
    rep.expectation_gap_se = est.std_error;

    const double band_z = sweep_band_z(N);
    rep.max_martingale_excess = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < N; ++n) {
        const McEstimate m = McEstimate::from_samples(mgl[n]);
        rep.max_martingale_mean = std::max(rep.max_martingale_mean, std::abs(m.mean));
        rep.max_martingale_excess =
            std::max(rep.max_martingale_excess, std::abs(m.mean) - band_z * m.std_error);
    }
    return rep;
}

}  // namespace spdelab
