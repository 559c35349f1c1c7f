#include "spdelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spdelab {

namespace {

double pairwise_sum_rec(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_rec(x, half) + pairwise_sum_rec(x + half, n - half);
}

// Kolmogorov tail Q(z) = P(D > z / sqrt(n)) asymptotically.
double kolmogorov_tail(double z) {
    if (z <= 0.0) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * z * z);
        s += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

}  // namespace

double pairwise_sum(std::span<const double> x) { return pairwise_sum_rec(x.data(), x.size()); }

McEstimate McEstimate::from_samples(std::span<const double> x) {
    McEstimate est;
    est.n = static_cast<long>(x.size());
    if (est.n == 0) return est;
    est.mean = pairwise_sum(x) / static_cast<double>(est.n);
    if (est.n >= 2) {
        std::vector<double> sq(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - est.mean;
            sq[i] = d * d;
        }
        est.variance = pairwise_sum(sq) / static_cast<double>(est.n - 1);
    }
    est.std_error = std::sqrt(est.variance / static_cast<double>(est.n));
    return est;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_to_normal_midpoint(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("ks_to_normal_midpoint: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        const double f_mid = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) / n;
        d = std::max(d, std::abs(f_mid - normal_cdf(samples[i])));
        i = j;
    }
    return d;
}

double ks_critical_value(long n, double alpha) {
    if (n < 1) throw std::invalid_argument("ks_critical_value: n < 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("ks_critical_value: alpha out of range");
    double lo = 1e-8, hi = 4.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_tail(mid) > alpha) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

double ks_two_sample_critical_value(long n, long m, double alpha) {
    const double eff = static_cast<double>(n) * static_cast<double>(m) /
                       static_cast<double>(n + m);
    return ks_critical_value(1, alpha) / std::sqrt(eff);
}

double sweep_band_z(long ntests, double alpha_total) {
    if (ntests < 1) ntests = 1;
    const double z = std::sqrt(2.0 * std::log(2.0 * static_cast<double>(ntests) / alpha_total));
    return std::max(4.0, z);
}

}  // namespace spdelab
