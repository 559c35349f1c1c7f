#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spdelab/harmonic.hpp"
#include "spdelab/heat.hpp"
#include "spdelab/noise.hpp"
#include "spdelab/stats.hpp"
#include "spdelab/trajectory.hpp"

namespace spdelab {

enum class SamplingMode {
    Sample,     ///< i.i.d. streams 0..P-1
    Enumerate,  ///< all 2^N Rademacher sign paths with equal weight
};

struct EnsembleConfig {
    long paths = 2;
    std::uint64_t base_seed = 0;
    IncrementKind kind = IncrementKind::Rademacher;
    SamplingMode mode = SamplingMode::Sample;
    int threads = 0;  ///< 0 = hardware concurrency
};

/// Per-functional estimates plus the raw samples (retained for
/// distribution-level diagnostics). Bit-reproducible: the noise is a
/// pure function of (seed, stream), results land in per-path slots, and
/// reductions are fixed pairwise trees.
struct EnsembleStats {
    long paths = 0;
    std::vector<std::string> names;
    std::vector<std::vector<double>> samples;  ///< samples[f][path]
    std::vector<McEstimate> estimates;

    const McEstimate& estimate(const std::string& name) const;
    const std::vector<double>& sample(const std::string& name) const;
};

/// Evaluates all functionals for one path.
using PathFunctionals = std::function<std::vector<double>(const IncrementPath&)>;

/// Run P paths (stream ids 0..P-1, or all sign masks in enumeration
/// mode) through `path_fn` in a pool; solver NonConvergence is rethrown
/// with the lowest failing path index attached.
EnsembleStats run_ensemble(const EnsembleConfig& config, const TimeGrid& grid,
                           const std::vector<std::string>& names,
                           const PathFunctionals& path_fn);

/// Index-deterministic parallel loop used by run_ensemble.
void parallel_for(long count, int threads, const std::function<void(long)>& body);

// ---------------------------------------------------------------------------
// expectation-level diagnostics

struct MartingaleReport {
    double max_step_mean = 0.0;    ///< max_n |mean (g^{n-1}, u^{n-1}) xi^n|
    double max_step_excess = 0.0;  ///< max_n (|mean| - z SE); <= ~0 passes
    double max_cross_mean = 0.0;   ///< cross terms (g^{k-1},g^{m-1}) xi^k xi^m, k<m
    double max_cross_excess = 0.0;
    long step_tests = 0;
    long cross_tests = 0;
    bool pass(double slack = 1e-12) const {
        return max_step_excess <= slack && max_cross_excess <= slack;
    }
};

/// step_terms[n][p] = (g^{n-1}, u^{n-1})_H xi^{n+1...}; xi[n][p] the raw
/// increments; g_pairings(k,m) = (g^{k-1}, g^{m-1})_H for deterministic
/// (additive) coefficients. Bands are sweep-adjusted (union bound).
MartingaleReport martingale_tests(const std::vector<std::vector<double>>& step_terms,
                                  const Eigen::MatrixXd& g_pairings,
                                  const std::vector<std::vector<double>>& xi);

struct BdgReport {
    double e_max_p = 0.0;   ///< E[max_n ||X^n||^p]
    double e_qv_p2 = 0.0;   ///< E[(sum ||X^n - X^{n-1}||^2)^{p/2}]
    double upper_ratio = 1.0;  ///< e_max_p / e_qv_p2 (1 when both vanish)
    double variation_constant = 0.0;  ///< Lemma-style C_p when g-norms are given
};

/// Two-sided moment bracket between the running maximum and the
/// quadratic variation; g_norms[p][m] = ||g^{m}|| enables the
/// quadratic-variation moment bound constant.
BdgReport bdg_audit(const std::vector<ItoPath>& ensemble, double p,
                    const std::vector<std::vector<double>>* g_norms = nullptr);

struct HolderFit {
    double slope = 0.0;
    double theta_hat = 0.0;  ///< (slope - 1) / p
    std::vector<double> deltas;
    std::vector<double> means;  ///< E[translate_moment] per delta
};

/// log-log regression of the ensemble translate moments over a delta
/// sweep; needs at least 4 sweep points.
HolderFit holder_fit(const std::vector<PolyPath>& paths, double p, const NormFn& norm,
                     const std::vector<double>& deltas);

struct LawLevel {
    int N = 0;
    int dim = 0;
    std::vector<double> samples;
};

struct LawReport {
    std::vector<double> ks_to_next;    ///< successive two-sample distances
    std::vector<double> ks_to_normal;  ///< midpoint one-sample distance per level
    bool monotone_trend = false;       ///< ks_to_normal strictly decreasing
};

/// Distribution convergence along a refinement ladder. KS trends are
/// evidence of convergence in law, not proof.
LawReport law_convergence(const std::vector<LawLevel>& ladder, bool with_normal);

struct MomentBoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  ///< the implied constant
};

/// Empirical two-sided evaluation of the heat a-priori bound with
/// moment parameter p (solution side vs data side).
MomentBoundReport heat_moment_bound(const Scalar1DSpace& space,
                                    const std::vector<TrajectoryRecord>& ensemble,
                                    const std::vector<CoeffVec>& f_loads,
                                    const std::vector<CoeffVec>& g_coeffs, double p);

/// Structural-bound version for the penalty flow: energy maxima, mixed
/// variable, and gradient increments against the data side.
MomentBoundReport harmonic_moment_bound(const HarmonicStepper& stepper,
                                        const std::vector<HarmonicTrajectory>& ensemble,
                                        double p);

}  // namespace spdelab
