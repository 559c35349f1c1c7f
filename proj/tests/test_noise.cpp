#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "spdelab/noise.hpp"
#include "spdelab/stats.hpp"

using namespace spdelab;

namespace {

// independent enumeration oracle: f(path) averaged over all 2^N sign paths
template <typename F>
double enumerate_mean(const TimeGrid& grid, F&& f) {
    const long total = 1L << grid.N();
    double acc = 0.0;
    for (long mask = 0; mask < total; ++mask) {
        acc += f(rademacher_from_mask(grid, static_cast<std::uint64_t>(mask)));
    }
    return acc / static_cast<double>(total);
}

}  // namespace

TEST_CASE("rademacher increments have magnitude sqrt(tau) exactly") {
    const TimeGrid grid(1.0, 4);  // tau = 0.25
    const auto path = gen_increments(IncrementKind::Rademacher, grid, 7, 0);
    for (double xi : path.values) CHECK(std::abs(xi) == 0.5);
}

TEST_CASE("increment streams are reproducible bit-for-bit") {
    const TimeGrid grid(2.0, 16);
    for (auto kind : {IncrementKind::Rademacher, IncrementKind::UniformScaled,
                      IncrementKind::Gaussian}) {
        const auto a = gen_increments(kind, grid, 123, 5);
        const auto b = gen_increments(kind, grid, 123, 5);
        CHECK(a.values == b.values);
        const auto c = gen_increments(kind, grid, 123, 6);
        CHECK(a.values != c.values);
    }
}

TEST_CASE("gen_increments rejects empty grids") {
    const TimeGrid grid(1.0, 0);
    CHECK_THROWS(gen_increments(IncrementKind::Gaussian, grid, 0, 0));
}

TEST_CASE("moment checks: mean ~ 0 and second moment ~ tau for every kind") {
    const TimeGrid grid(1.0, 10);  // tau = 0.1
    const long samples = 120000;
    for (auto kind : {IncrementKind::Rademacher, IncrementKind::UniformScaled,
                      IncrementKind::Gaussian}) {
        std::vector<double> xs, sq;
        xs.reserve(samples);
        sq.reserve(samples);
        for (long s = 0; s < samples; ++s) {
            const auto p = gen_increments(kind, grid, 99, static_cast<std::uint64_t>(s / 10));
            const double v = p.values[s % 10];
            xs.push_back(v);
            sq.push_back(v * v);
        }
        const auto m1 = McEstimate::from_samples(xs);
        CHECK(std::abs(m1.mean) <= 4.0 * m1.std_error);
        const auto m2 = McEstimate::from_samples(sq);
        CHECK(std::abs(m2.mean - grid.tau()) <= 4.0 * m2.std_error);
    }
}

TEST_CASE("uniform-scaled fourth moment matches (3 tau)^2 / 5") {
    const TimeGrid grid(1.0, 10);  // tau = 0.1
    const long samples = 200000;
    std::vector<double> q;
    q.reserve(samples);
    for (long s = 0; s < samples; ++s) {
        const auto p =
            gen_increments(IncrementKind::UniformScaled, grid, 4, static_cast<std::uint64_t>(s));
        q.push_back(std::pow(p.values[0], 4));
    }
    const auto est = McEstimate::from_samples(q);
    const double expected = std::pow(3.0 * grid.tau(), 2) / 5.0;  // 0.018
    CHECK(expected == doctest::Approx(0.018));
    CHECK(std::abs(est.mean - expected) <= 4.0 * est.std_error);
}

TEST_CASE("gaussian sample variance within 3 standard errors of tau") {
    const TimeGrid grid(1.0, 10);
    const long samples = 100000;
    std::vector<double> sq;
    sq.reserve(samples);
    for (long s = 0; s < samples; ++s) {
        const auto p =
            gen_increments(IncrementKind::Gaussian, grid, 21, static_cast<std::uint64_t>(s));
        sq.push_back(p.values[0] * p.values[0]);
    }
    const auto est = McEstimate::from_samples(sq);
    CHECK(std::abs(est.mean - grid.tau()) <= 3.0 * est.std_error);
}

TEST_CASE("discrete wiener telescopes and matches a summation oracle") {
    SUBCASE("N = 0 gives the single zero level") {
        TimeGrid grid(1.0, 0);
        IncrementPath empty{IncrementKind::Rademacher, grid, {}, 0, 0};
        const auto w = discrete_wiener(empty);
        REQUIRE(w.levels.size() == 1);
        CHECK(w.levels[0](0) == 0.0);
    }
    SUBCASE("two opposite steps return to zero") {
        TimeGrid grid(1.0, 2);
        const double rt = std::sqrt(grid.tau());
        IncrementPath p{IncrementKind::Rademacher, grid, {rt, -rt}, 0, 0};
        const auto w = discrete_wiener(p);
        CHECK(w.levels[0](0) == 0.0);
        CHECK(w.levels[1](0) == rt);
        CHECK(w.levels[2](0) == 0.0);
    }
    SUBCASE("last level equals the exact sum of the increments") {
        TimeGrid grid(3.0, 37);
        const auto p = gen_increments(IncrementKind::Gaussian, grid, 8, 3);
        const auto w = discrete_wiener(p);
        const double oracle = std::accumulate(p.values.begin(), p.values.end(), 0.0);
        CHECK(w.levels.back()(0) == doctest::Approx(oracle).epsilon(1e-14));
    }
}

TEST_CASE("discrete Ito integral basics") {
    const TimeGrid grid(1.0, 6);
    const auto incs = gen_increments(IncrementKind::UniformScaled, grid, 5, 1);

    SUBCASE("constant scalar integrand reproduces the wiener sums") {
        std::vector<Eigen::VectorXd> g(6, Eigen::VectorXd::Ones(1));
        const auto x = discrete_ito(g, incs);
        const auto w = discrete_wiener(incs);
        for (int n = 0; n <= 6; ++n) CHECK(x.levels[n](0) == doctest::Approx(w.levels[n](0)));
    }
    SUBCASE("single term: X^1 = xi^1 v") {
        TimeGrid g1(1.0, 1);
        IncrementPath p{IncrementKind::Rademacher, g1, {0.5}, 0, 0};
        Eigen::VectorXd v(3);
        v << 1.0, -2.0, 0.5;
        const auto x = discrete_ito({v}, p);
        CHECK((x.levels[1] - 0.5 * v).norm() == 0.0);
    }
    SUBCASE("length mismatch throws") {
        std::vector<Eigen::VectorXd> g(5, Eigen::VectorXd::Ones(1));
        CHECK_THROWS(discrete_ito(g, incs));
    }
}

TEST_CASE("exhaustive Ito isometry with a predictable vector integrand, N = 8") {
    const int N = 8, d = 3;
    const TimeGrid grid(1.0, N);
    const double tau = grid.tau();

    // adapted integrand: g^{m-1} depends on the first m-1 increments only
    const auto integrand = [&](const IncrementPath& p) {
        std::vector<Eigen::VectorXd> g(N);
        double w = 0.0;
        for (int m = 1; m <= N; ++m) {
            Eigen::VectorXd v(d);
            v << 1.0, 0.5 * w, std::sin(w);
            g[m - 1] = v;
            w += p.xi(m);
        }
        return g;
    };

    for (int n = 1; n <= N; ++n) {
        const double lhs = enumerate_mean(grid, [&](const IncrementPath& p) {
            const auto x = discrete_ito(integrand(p), p);
            return x.levels[n].squaredNorm();
        });
        double rhs = 0.0;
        for (int m = 1; m <= n; ++m) {
            rhs += tau * enumerate_mean(grid, [&](const IncrementPath& p) {
                       return integrand(p)[m - 1].squaredNorm();
                   });
        }
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }

    // martingale property: the exhaustive average of X^n is the zero vector
    for (int n = 1; n <= N; ++n) {
        for (int c = 0; c < d; ++c) {
            const double mean = enumerate_mean(grid, [&](const IncrementPath& p) {
                return discrete_ito(integrand(p), p).levels[n](c);
            });
            CHECK(std::abs(mean) <= 1e-12);
        }
    }
}

TEST_CASE("quadratic variation") {
    SUBCASE("constant scalar integrand: <X^5>(1,1) = 5 tau = 1") {
        TimeGrid grid(1.2, 6);  // tau = 0.2
        std::vector<Eigen::VectorXd> g(6, Eigen::VectorXd::Ones(1));
        Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
        CHECK(quadratic_variation(g, grid, one, one, 5) == doctest::Approx(1.0));
    }
    SUBCASE("zero integrand vanishes for all n") {
        TimeGrid grid(1.0, 6);
        std::vector<Eigen::VectorXd> g(6, Eigen::VectorXd::Zero(2));
        Eigen::VectorXd u(2), v(2);
        u << 1, 2;
        v << -3, 4;
        for (int n = 0; n <= 6; ++n) CHECK(quadratic_variation(g, grid, u, v, n) == 0.0);
    }
    SUBCASE("index out of range throws") {
        TimeGrid grid(1.0, 4);
        std::vector<Eigen::VectorXd> g(4, Eigen::VectorXd::Ones(1));
        Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
        CHECK_THROWS(quadratic_variation(g, grid, one, one, 5));
    }
    SUBCASE("nondecreasing in n on the diagonal") {
        TimeGrid grid(1.0, 12);
        std::vector<Eigen::VectorXd> g;
        for (int m = 0; m < 12; ++m) {
            Eigen::VectorXd v(2);
            v << std::cos(m * 0.7), std::sin(m * 1.3);
            g.push_back(v);
        }
        Eigen::VectorXd u(2);
        u << 0.3, -1.1;
        double prev = 0.0;
        for (int n = 0; n <= 12; ++n) {
            const double qv = quadratic_variation(g, grid, u, u, n);
            CHECK(qv >= prev);
            prev = qv;
        }
    }
}

TEST_CASE("exhaustive variation property, N = 6: E[(X,u)(X,v) - <X>(u,v)] = 0") {
    const int N = 6, d = 2;
    const TimeGrid grid(0.5, N);

    // adapted integrand again (the quadratic variation is then random)
    const auto integrand = [&](const IncrementPath& p) {
        std::vector<Eigen::VectorXd> g(N);
        double w = 0.0;
        for (int m = 1; m <= N; ++m) {
            Eigen::VectorXd v(d);
            v << 1.0 + 0.3 * w, -0.7 + w * w;
            g[m - 1] = v;
            w += p.xi(m);
        }
        return g;
    };
    Eigen::VectorXd u(d), v(d);
    u << 0.9, -0.2;
    v << 0.4, 1.5;

    for (int n = 1; n <= N; ++n) {
        const double mean = enumerate_mean(grid, [&](const IncrementPath& p) {
            const auto g = integrand(p);
            const auto x = discrete_ito(g, p);
            return x.levels[n].dot(u) * x.levels[n].dot(v) -
                   quadratic_variation(g, grid, u, v, n);
        });
        CHECK(std::abs(mean) <= 1e-12);
    }
}
