#include "spdelab/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace spdelab {

const McEstimate& EnsembleStats::estimate(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return estimates[i];
    }
    throw std::out_of_range("EnsembleStats: unknown functional " + name);
}

const std::vector<double>& EnsembleStats::sample(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return samples[i];
    }
    throw std::out_of_range("EnsembleStats: unknown functional " + name);
}

void parallel_for(long count, int threads, const std::function<void(long)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, count)));
    if (threads == 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (long i = 0; i < count; ++i) {
        if (errors[static_cast<std::size_t>(i)]) std::rethrow_exception(errors[i]);
    }
}

EnsembleStats run_ensemble(const EnsembleConfig& config, const TimeGrid& grid,
                           const std::vector<std::string>& names,
                           const PathFunctionals& path_fn) {
    long paths = config.paths;
    if (config.mode == SamplingMode::Enumerate) {
        if (config.kind != IncrementKind::Rademacher)
            throw std::invalid_argument("run_ensemble: enumeration needs Rademacher increments");
        if (grid.N() > 24) throw std::invalid_argument("run_ensemble: enumeration N too large");
        paths = 1L << grid.N();
    }
    if (paths < 2) throw std::invalid_argument("run_ensemble: need at least 2 paths");

    EnsembleStats stats;
    stats.paths = paths;
    stats.names = names;
    stats.samples.assign(names.size(), std::vector<double>(paths, 0.0));

    const auto run_one = [&](long p) {
        IncrementPath noise =
            config.mode == SamplingMode::Enumerate
                ? rademacher_from_mask(grid, static_cast<std::uint64_t>(p))
                : gen_increments(config.kind, grid, config.base_seed,
                                 static_cast<std::uint64_t>(p));
        std::vector<double> values;
        try {
            values = path_fn(noise);
        } catch (NonConvergence& e) {
            if (e.path < 0) e.path = p;
            throw;
        }
        if (values.size() != names.size())
            throw std::logic_error("run_ensemble: functional count mismatch");
        for (std::size_t f = 0; f < values.size(); ++f) stats.samples[f][p] = values[f];
    };
    parallel_for(paths, config.threads, run_one);

    stats.estimates.reserve(names.size());
    for (std::size_t f = 0; f < names.size(); ++f) {
        stats.estimates.push_back(McEstimate::from_samples(stats.samples[f]));
    }
    return stats;
}

// ---------------------------------------------------------------------------

MartingaleReport martingale_tests(const std::vector<std::vector<double>>& step_terms,
                                  const Eigen::MatrixXd& g_pairings,
                                  const std::vector<std::vector<double>>& xi) {
    MartingaleReport rep;
    rep.max_step_excess = -std::numeric_limits<double>::infinity();
    rep.max_cross_excess = -std::numeric_limits<double>::infinity();

    const long n_steps = static_cast<long>(step_terms.size());
    const double step_z = sweep_band_z(n_steps);
    for (const auto& series : step_terms) {
        const McEstimate est = McEstimate::from_samples(series);
        rep.max_step_mean = std::max(rep.max_step_mean, std::abs(est.mean));
        rep.max_step_excess =
            std::max(rep.max_step_excess, std::abs(est.mean) - step_z * est.std_error);
        ++rep.step_tests;
    }

    const long N = static_cast<long>(xi.size());
    const long npairs = N * (N - 1) / 2;
    const double cross_z = sweep_band_z(npairs);
    std::vector<double> buf;
    for (long k = 0; k < N; ++k) {
        for (long m = k + 1; m < N; ++m) {
            const double pairing = g_pairings(k, m);
            const std::size_t P = xi[k].size();
            buf.resize(P);
            for (std::size_t p = 0; p < P; ++p) buf[p] = pairing * xi[k][p] * xi[m][p];
            const McEstimate est = McEstimate::from_samples(buf);
            rep.max_cross_mean = std::max(rep.max_cross_mean, std::abs(est.mean));
            rep.max_cross_excess =
                std::max(rep.max_cross_excess, std::abs(est.mean) - cross_z * est.std_error);
            ++rep.cross_tests;
        }
    }
    if (rep.step_tests == 0) rep.max_step_excess = 0.0;
    if (rep.cross_tests == 0) rep.max_cross_excess = 0.0;
    return rep;
}

BdgReport bdg_audit(const std::vector<ItoPath>& ensemble, double p,
                    const std::vector<std::vector<double>>* g_norms) {
    if (ensemble.empty()) throw std::invalid_argument("bdg_audit: empty ensemble");
    if (p < 1.0) throw std::invalid_argument("bdg_audit: p must be >= 1");
    const std::size_t P = ensemble.size();
    std::vector<double> maxp(P), qvp(P);
    for (std::size_t i = 0; i < P; ++i) {
        const auto& path = ensemble[i];
        double mx = 0.0, qv = 0.0;
        for (std::size_t n = 1; n < path.levels.size(); ++n) {
            mx = std::max(mx, path.levels[n].norm());
            qv += (path.levels[n] - path.levels[n - 1]).squaredNorm();
        }
        maxp[i] = std::pow(mx, p);
        qvp[i] = std::pow(qv, 0.5 * p);
    }
    BdgReport rep;
    rep.e_max_p = McEstimate::from_samples(maxp).mean;
    rep.e_qv_p2 = McEstimate::from_samples(qvp).mean;
    rep.upper_ratio = rep.e_qv_p2 > 0.0 ? rep.e_max_p / rep.e_qv_p2 : 1.0;

    if (g_norms != nullptr && !g_norms->empty()) {
        const auto& grid = ensemble.front().grid;
        const int N = grid.N();
        const double tau = grid.tau();
        // E[(sum ||g^{m-1} xi^m||^2)^{p/2}] <= C (N tau)^{p/2-1} sum tau E||g^{m-1}||^p
        double rhs = 0.0;
        std::vector<double> gm(P);
        for (int m = 0; m < N; ++m) {
            for (std::size_t i = 0; i < P; ++i) gm[i] = std::pow((*g_norms)[i][m], p);
            rhs += tau * McEstimate::from_samples(gm).mean;
        }
        rhs *= std::pow(N * tau, 0.5 * p - 1.0);
        rep.variation_constant = rhs > 0.0 ? rep.e_qv_p2 / rhs : 0.0;
    }
    return rep;
}

HolderFit holder_fit(const std::vector<PolyPath>& paths, double p, const NormFn& norm,
                     const std::vector<double>& deltas) {
    if (deltas.size() < 4) throw std::invalid_argument("holder_fit: need >= 4 sweep points");
    if (paths.empty()) throw std::invalid_argument("holder_fit: empty ensemble");
    HolderFit fit;
    fit.deltas = deltas;
    fit.means.resize(deltas.size());
    std::vector<double> vals(paths.size());
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        for (std::size_t i = 0; i < paths.size(); ++i) {
            vals[i] = translate_moment(paths[i], deltas[d], p, norm);
        }
        fit.means[d] = McEstimate::from_samples(vals).mean;
    }
    // least squares on log-log
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(deltas.size());
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        const double x = std::log(deltas[d]);
        const double y = std::log(std::max(fit.means[d], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.theta_hat = (fit.slope - 1.0) / p;
    return fit;
}

LawReport law_convergence(const std::vector<LawLevel>& ladder, bool with_normal) {
    if (ladder.size() < 2) throw std::invalid_argument("law_convergence: need >= 2 levels");
    for (const auto& lvl : ladder) {
        if (lvl.samples.size() < 100)
            throw std::invalid_argument("law_convergence: sample too small (P < 100)");
    }
    LawReport rep;
    for (std::size_t l = 0; l + 1 < ladder.size(); ++l) {
        rep.ks_to_next.push_back(ks_two_sample(ladder[l].samples, ladder[l + 1].samples));
    }
    if (with_normal) {
        for (const auto& lvl : ladder) {
            rep.ks_to_normal.push_back(ks_to_normal_midpoint(lvl.samples));
        }
        rep.monotone_trend = true;
        for (std::size_t l = 0; l + 1 < rep.ks_to_normal.size(); ++l) {
            if (!(rep.ks_to_normal[l + 1] < rep.ks_to_normal[l])) rep.monotone_trend = false;
        }
    }
    return rep;
}

MomentBoundReport heat_moment_bound(const Scalar1DSpace& space,
                                    const std::vector<TrajectoryRecord>& ensemble,
                                    const std::vector<CoeffVec>& f_loads,
                                    const std::vector<CoeffVec>& g_coeffs, double p) {
    if (ensemble.empty()) throw std::invalid_argument("heat_moment_bound: empty ensemble");
    const auto& grid = ensemble.front().grid;
    const int N = grid.N();
    const double tau = grid.tau();
    const std::size_t P = ensemble.size();

    std::vector<double> maxh(P), uqv(P), incq(P);
    for (std::size_t i = 0; i < P; ++i) {
        const auto& rec = ensemble[i];
        double mx = space.h_norm(rec.levels[0]);
        double su = 0.0, si = 0.0;
        for (int n = 1; n <= N; ++n) {
            mx = std::max(mx, space.h_norm(rec.levels[n]));
            const double un = space.u_norm(rec.levels[n]);
            su += tau * un * un;
            const CoeffVec du = rec.levels[n] - rec.levels[n - 1];
            const double dn = space.h_norm(du);
            si += dn * dn;
        }
        maxh[i] = std::pow(mx, p);
        uqv[i] = std::pow(su, 0.5 * p);
        incq[i] = std::pow(si, 0.5 * p);
    }
    MomentBoundReport rep;
    rep.lhs = std::pow(McEstimate::from_samples(maxh).mean, 1.0 / p) +
              std::pow(McEstimate::from_samples(uqv).mean, 1.0 / p) +
              std::pow(McEstimate::from_samples(incq).mean, 1.0 / p);

    double f_sq = 0.0, g_pp = 0.0;
    for (int n = 0; n < N; ++n) {
        const double fd = space.dual_norm_of_load(f_loads[n]);
        f_sq += tau * fd * fd;
        g_pp += tau * std::pow(space.h_norm(g_coeffs[n]), p);
    }
    rep.rhs = space.h_norm(ensemble.front().levels[0]) + std::sqrt(f_sq) +
              std::pow(grid.T(), 0.5 - 1.0 / p) * std::pow(g_pp, 1.0 / p);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

MomentBoundReport harmonic_moment_bound(const HarmonicStepper& stepper,
                                        const std::vector<HarmonicTrajectory>& ensemble,
                                        double p) {
    if (ensemble.empty()) throw std::invalid_argument("harmonic_moment_bound: empty ensemble");
    const auto& space = *stepper.problem().space;
    const auto& K = space.stiffness();
    const auto& M = space.mass();
    const TimeGrid& grid = stepper.grid();
    const int N = grid.N();
    const double tau = grid.tau();
    const std::size_t P = ensemble.size();

    std::vector<double> maxe(P), aqv(P), incq(P);
    for (std::size_t i = 0; i < P; ++i) {
        const auto& traj = ensemble[i];
        double mx = stepper.energy(traj.levels[0]);
        double sa = 0.0, si = 0.0;
        for (int n = 1; n <= N; ++n) {
            mx = std::max(mx, stepper.energy(traj.levels[n]));
            sa += tau * traj.a_levels[n - 1].dot(M * traj.a_levels[n - 1]);
            const CoeffVec du = traj.levels[n] - traj.levels[n - 1];
            si += du.dot(K * du);
        }
        maxe[i] = std::pow(std::max(mx, 0.0), 0.5 * p);
        aqv[i] = std::pow(sa, 0.5 * p);
        incq[i] = std::pow(si, 0.5 * p);
    }
    MomentBoundReport rep;
    rep.lhs = std::pow(McEstimate::from_samples(maxe).mean, 1.0 / p) +
              std::pow(McEstimate::from_samples(aqv).mean, 1.0 / p) +
              std::pow(McEstimate::from_samples(incq).mean, 1.0 / p);

    double f_sq = 0.0;
    for (int n = 0; n < N; ++n) {
        const CoeffVec& fl = stepper.f_loads()[n];
        const double fh = std::sqrt(std::max(0.0, fl.dot(space.mass_llt().solve(fl))));
        f_sq += tau * fh * fh;
    }
    rep.rhs = std::sqrt(std::max(stepper.energy(ensemble.front().levels[0]), 0.0)) +
              std::sqrt(f_sq);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

}  // namespace spdelab
