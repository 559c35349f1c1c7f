#include "spdelab/navier_stokes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spdelab/quadrature.hpp"
#include "spdelab/rng.hpp"

namespace spdelab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

void NSProblem2D::validate_envelope(int probes, std::uint64_t seed) const {
    if (!gamma_fn) return;
    for (int s = 0; s < probes; ++s) {
        const double t = rng::uniform01(rng::word(seed, 1, s, 0));
        const double x = kTwoPi * rng::uniform01(rng::word(seed, 1, s, 1));
        const double y = kTwoPi * rng::uniform01(rng::word(seed, 1, s, 2));
        const double u1 = 4.0 * rng::uniform01(rng::word(seed, 1, s, 3)) - 2.0;
        const double u2 = 4.0 * rng::uniform01(rng::word(seed, 1, s, 4)) - 2.0;
        const double lhs = gamma_fn(t, x, y, u1, u2).norm();
        const double kv = k_env ? k_env(t, x, y) : 0.0;
        const double rhs = growth_const * std::hypot(u1, u2) + kv;
        if (lhs > rhs * (1.0 + 1e-9) + 1e-12) {
            throw std::invalid_argument(
                "NSProblem2D: declared growth envelope violated at a probe point");
        }
    }
}

NSStepper::NSStepper(const NSProblem2D& problem, const TimeGrid& grid)
    : problem_(&problem), grid_(grid) {
    const auto* space = problem.space;
    if (space == nullptr) throw std::invalid_argument("NSStepper: missing space");
    if (!(problem.mu > 0.0)) throw std::invalid_argument("NSStepper: mu must be > 0");
    if (problem.u0.size() != space->dim())
        throw std::invalid_argument("NSStepper: u0 length != space dim");
    problem.validate_envelope();

    viscous_ = space->viscous_matrix_sym(problem.mu);
    const Eigen::MatrixXd grad_form = space->viscous_matrix_grad(problem.mu);
    if ((viscous_ - grad_form).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::logic_error(
            "NSStepper: symmetric-gradient and gradient assemblies disagree");
    }

    implicit_diag_.resize(space->dim());
    for (int i = 0; i < space->dim(); ++i) {
        implicit_diag_(i) = 1.0 + grid.tau() * viscous_(i, i);
    }

    const CoeffVec zero = CoeffVec::Zero(space->dim());
    f_loads_.assign(grid.N(), zero);
    if (problem.f) {
        for (int n = 1; n <= grid.N(); ++n) {
            const double t0 = grid.time(n - 1), t1 = grid.time(n);
            f_loads_[n - 1] = space->load([&](double x, double y) -> Eigen::Vector2d {
                const GaussRule rule = GaussRule::of_order(8);
                const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
                Eigen::Vector2d acc = Eigen::Vector2d::Zero();
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    acc += rule.weights[i] * problem.f(mid + half * rule.nodes[i], x, y);
                }
                return 0.5 * acc;
            });
        }
    }
}

CoeffVec NSStepper::multiplicative_noise_eval(const CoeffVec& u_prev, int window) const {
    const auto& space = *problem_->space;
    if (!problem_->gamma_fn) return CoeffVec::Zero(space.dim());
    if (window < 1 || window > grid_.N())
        throw std::out_of_range("multiplicative_noise_eval: window index");
    const double t0 = grid_.time(window - 1), t1 = grid_.time(window);
    const GaussRule rule = GaussRule::of_order(6);
    const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);

    const int L = space.grid_points();
    const int np = L * L;
    const Eigen::MatrixXd ug = space.velocity_on_grid(u_prev);
    Eigen::MatrixXd field = Eigen::MatrixXd::Zero(np, 2);
    for (int i = 0; i < L; ++i) {
        for (int j = 0; j < L; ++j) {
            const double x = kTwoPi * i / L, y = kTwoPi * j / L;
            const int r = i * L + j;
            Eigen::Vector2d acc = Eigen::Vector2d::Zero();
            for (std::size_t qn = 0; qn < rule.nodes.size(); ++qn) {
                acc += rule.weights[qn] * problem_->gamma_fn(mid + half * rule.nodes[qn], x, y,
                                                             ug(r, 0), ug(r, 1));
            }
            field.row(r) = (0.5 * acc).transpose();
        }
    }
    return space.load_from_grid(field);
}

CoeffVec NSStepper::solve_semi_implicit(const CoeffVec& transport, const CoeffVec& rhs,
                                        StepDiagnostics* diag) const {
    const auto& space = *problem_->space;
    const double tau = grid_.tau();
    const auto& set = problem_->newton;

    // preconditioned Richardson on
    //   (I + tau V) c + (tau) Bc = rhs,  B = skew convection with frozen
    // transport velocity; contraction for desk-scale tau
    CoeffVec c = rhs.cwiseQuotient(implicit_diag_);
    double rnorm = 0.0;
    int it = 0;
    for (; it < 200; ++it) {
        const CoeffVec conv = space.convection_apply(transport, c);
        const CoeffVec resid = implicit_diag_.cwiseProduct(c) + tau * conv - rhs;
        rnorm = resid.norm();
        if (rnorm <= set.tolerance) break;
        c -= resid.cwiseQuotient(implicit_diag_);
    }
    if (rnorm > set.tolerance) {
        // dense fallback: assemble the frozen-convection operator
        const int d = space.dim();
        Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(d, d);
        for (int jcol = 0; jcol < d; ++jcol) {
            CoeffVec e = CoeffVec::Zero(d);
            e(jcol) = 1.0;
            sys.col(jcol) = tau * space.convection_apply(transport, e);
            sys(jcol, jcol) += implicit_diag_(jcol);
        }
        c = sys.partialPivLu().solve(rhs);
        rnorm = (implicit_diag_.cwiseProduct(c) + tau * space.convection_apply(transport, c) -
                 rhs)
                    .norm();
        if (rnorm > 100 * set.tolerance) {
            throw NonConvergence("ns_step: linear solve did not reach tolerance", rnorm, it);
        }
    }
    if (diag != nullptr) {
        diag->iterations = it;
        diag->residual = rnorm;
    }
    return c;
}

CoeffVec NSStepper::step(const CoeffVec& u_prev, const CoeffVec& f_n, const CoeffVec& g_prev,
                         double xi_n, StepDiagnostics* diag) const {
    const auto& space = *problem_->space;
    const double tau = grid_.tau();
    const CoeffVec rhs = u_prev + tau * f_n + g_prev * xi_n;  // mass = identity

    if (problem_->stepping == NSStepping::SemiImplicit) {
        return solve_semi_implicit(u_prev, rhs, diag);
    }

    // fully implicit: Newton on c + tau b(c, c, .) + tau V c = rhs
    const auto& set = problem_->newton;
    const int d = space.dim();
    CoeffVec c = solve_semi_implicit(u_prev, rhs, nullptr);  // warm start
    auto residual = [&](const CoeffVec& w) -> CoeffVec {
        return implicit_diag_.cwiseProduct(w) + tau * space.convection_apply(w, w) - rhs;
    };
    CoeffVec res = residual(c);
    double rnorm = res.norm();
    int iters = 0;
    for (; iters < set.max_iterations && rnorm > set.tolerance; ++iters) {
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(d, d);
        for (int jcol = 0; jcol < d; ++jcol) {
            CoeffVec e = CoeffVec::Zero(d);
            e(jcol) = 1.0;
            jac.col(jcol) =
                tau * (space.convection_apply(c, e) + space.convection_apply(e, c));
            jac(jcol, jcol) += implicit_diag_(jcol);
        }
        const CoeffVec dir = jac.partialPivLu().solve(-res);
        double alpha = 1.0;
        bool accepted = false;
        for (int h = 0; h <= set.max_halvings; ++h) {
            const CoeffVec trial = c + alpha * dir;
            const CoeffVec tres = residual(trial);
            if (tres.norm() < rnorm) {
                c = trial;
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
        throw NonConvergence("ns_step: Newton did not reach tolerance", rnorm, iters);
    }
    if (diag != nullptr) {
        diag->iterations = iters;
        diag->residual = rnorm;
    }
    return c;
}

TrajectoryRecord NSStepper::run_path(const IncrementPath& noise) const {
    if (!(noise.grid == grid_)) throw std::invalid_argument("ns run_path: grid mismatch");
    TrajectoryRecord rec;
    rec.grid = grid_;
    rec.noise = noise;
    rec.levels.resize(grid_.N() + 1);
    rec.levels[0] = problem_->u0;
    rec.diagnostics.assign(grid_.N(), StepDiagnostics{});
    for (int n = 1; n <= grid_.N(); ++n) {
        const CoeffVec g_prev = multiplicative_noise_eval(rec.levels[n - 1], n);
        try {
            rec.levels[n] = step(rec.levels[n - 1], f_loads_[n - 1], g_prev, noise.xi(n),
                                 &rec.diagnostics[n - 1]);
        } catch (NonConvergence& e) {
            e.step = n;
            throw;
        }
    }
    return rec;
}

double skew_symmetry_check(const FourierDivFree2DSpace& space, const CoeffVec& u,
                           const CoeffVec& w) {
    return space.trilinear_skew(u, w, w);
}

std::vector<double> ns_energy_check(const NSStepper& stepper, const TrajectoryRecord& rec) {
    const double tau = stepper.grid().tau();
    const int N = stepper.grid().N();
    std::vector<double> residuals(N);
    for (int n = 1; n <= N; ++n) {
        const auto& u = rec.levels[n];
        const CoeffVec du = u - rec.levels[n - 1];
        const CoeffVec g_prev = stepper.multiplicative_noise_eval(rec.levels[n - 1], n);
        const double lhs = 0.5 * u.squaredNorm() + 0.5 * du.squaredNorm() +
                           tau * u.dot(stepper.viscous() * u);
        const double rhs = 0.5 * rec.levels[n - 1].squaredNorm() +
                           tau * stepper.f_loads()[n - 1].dot(u) +
                           g_prev.dot(u) * rec.noise.xi(n);
        residuals[n - 1] = lhs - rhs;
    }
    return residuals;
}

double ns_growth_envelope_excess(const NSStepper& stepper, const TrajectoryRecord& rec) {
    const auto& problem = stepper.problem();
    const auto& space = *problem.space;
    const int L = space.grid_points();
    double worst = -std::numeric_limits<double>::infinity();
    for (int n = 1; n <= stepper.grid().N(); ++n) {
        const CoeffVec g_prev = stepper.multiplicative_noise_eval(rec.levels[n - 1], n);
        // ||k-bar||_H over the window by the same grid quadrature
        double k_sq = 0.0;
        if (problem.k_env) {
            const double t0 = stepper.grid().time(n - 1), t1 = stepper.grid().time(n);
            for (int i = 0; i < L; ++i) {
                for (int j = 0; j < L; ++j) {
                    const double x = kTwoPi * i / L, y = kTwoPi * j / L;
                    const double kbar = gauss_integrate(
                                            [&](double t) { return problem.k_env(t, x, y); },
                                            t0, t1, 6) /
                                        stepper.grid().tau();
                    k_sq += kbar * kbar;
                }
            }
            k_sq *= space.cell_weight();
        }
        const double bound = problem.growth_const * space.h_norm(rec.levels[n - 1]) +
                             std::sqrt(k_sq);
        worst = std::max(worst, space.h_norm(g_prev) - bound);
    }
    return worst;
}

}  // namespace spdelab
