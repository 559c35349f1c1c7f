#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spdelab/rng.hpp"
#include "spdelab/stats.hpp"

using namespace spdelab;

TEST_CASE("pairwise sum agrees with long-double reference") {
    std::vector<double> x(10001);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.1 * i) / (1.0 + i);
    long double ref = 0.0L;
    for (double v : x) ref += v;
    CHECK(pairwise_sum(x) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
}

TEST_CASE("McEstimate standard-error contract") {
    std::vector<double> x;
    for (int i = 0; i < 1000; ++i) x.push_back(rng::uniform01(rng::word(3, 0, i, 0)));
    const auto est = McEstimate::from_samples(x);
    CHECK(est.std_error == doctest::Approx(std::sqrt(est.variance / est.n)).epsilon(1e-15));
    CHECK(est.mean == doctest::Approx(0.5).epsilon(0.05));
    CHECK(est.variance == doctest::Approx(1.0 / 12.0).epsilon(0.15));
}

TEST_CASE("normal cdf reference points") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
    CHECK(normal_cdf(-2.0) == doctest::Approx(0.022750131948179195).epsilon(1e-12));
}

TEST_CASE("kolmogorov critical value matches the classical table") {
    // asymptotic K_alpha: 1.3581 at 5%, 1.6276 at 1%
    CHECK(ks_critical_value(1, 0.05) == doctest::Approx(1.3581).epsilon(1e-3));
    CHECK(ks_critical_value(1, 0.01) == doctest::Approx(1.6276).epsilon(1e-3));
    CHECK(ks_critical_value(100, 0.05) == doctest::Approx(0.13581).epsilon(1e-3));
}

TEST_CASE("two-sample KS on identical samples is zero and detects shifts") {
    std::vector<double> a, b, c;
    for (int i = 0; i < 500; ++i) {
        const double u = rng::uniform01(rng::word(9, 1, i, 0));
        a.push_back(u);
        b.push_back(u);
        c.push_back(u + 0.5);
    }
    CHECK(ks_two_sample(a, b) == 0.0);
    CHECK(ks_two_sample(a, c) > 0.4);
}

TEST_CASE("midpoint KS to normal is small for true normal samples") {
    std::vector<double> z;
    for (int i = 0; i < 20000; ++i) {
        z.push_back(rng::standard_normal(rng::word(17, 2, i, 0), rng::word(17, 2, i, 1)));
    }
    CHECK(ks_to_normal_midpoint(z) < 0.02);
}

TEST_CASE("sweep band never drops below 4 and grows with the test count") {
    CHECK(sweep_band_z(1) == 4.0);
    CHECK(sweep_band_z(2000) > 5.0);
    CHECK(sweep_band_z(2000) < 7.0);
}
