#pragma once

#include <span>
#include <vector>

namespace spdelab {

/// Sum with a fixed pairwise reduction tree. The result depends only on
/// the element order, never on thread scheduling, so parallel ensemble
/// runs reduce to bitwise-identical statistics.
double pairwise_sum(std::span<const double> x);

/// Monte Carlo estimate of a scalar functional.
struct McEstimate {
    double mean = 0.0;
    double variance = 0.0;   ///< unbiased sample variance
    double std_error = 0.0;  ///< sqrt(variance / n)
    long n = 0;

    static McEstimate from_samples(std::span<const double> x);
};

double normal_cdf(double x);

/// sup_x |F_n(x) - F_m(x)| for two empirical samples (two-sided,
/// standard convention).
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample distance to the standard normal with the midpoint
/// (continuity-corrected) convention: samples are grouped into atoms and
/// the empirical CDF is read at the jump midpoint. For lattice-valued
/// samples the plain sup-distance is bounded below by half the largest
/// atom mass no matter how fine the lattice; the midpoint statistic is
/// the one that contracts under refinement.
double ks_to_normal_midpoint(std::vector<double> samples);

/// Critical value c such that P(D_n > c) ~ alpha for the one-sample KS
/// statistic with n observations, via the Kolmogorov series
/// Q(z) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 z^2) inverted by bisection.
double ks_critical_value(long n, double alpha);

/// Two-sample version: threshold for samples of size n and m.
double ks_two_sample_critical_value(long n, long m, double alpha);

/// Half-width multiplier for a sweep of `ntests` simultaneous zero-mean
/// checks with union-bound family error `alpha_total`; never below 4.
double sweep_band_z(long ntests, double alpha_total = 1e-3);

}  // namespace spdelab
