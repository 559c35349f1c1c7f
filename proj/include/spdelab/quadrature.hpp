#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>

namespace spdelab {

/// Gauss-Legendre nodes/weights on [-1,1]. Orders 1..12 are tabulated;
/// an n-point rule is exact for polynomials of degree 2n-1.
struct GaussRule {
    std::span<const double> nodes;
    std::span<const double> weights;

    static GaussRule of_order(int npoints);
};

/// Integrate f over [a,b] with an npoints Gauss rule.
template <typename F>
double gauss_integrate(F&& f, double a, double b, int npoints) {
    const GaussRule rule = GaussRule::of_order(npoints);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * acc;
}

/// Composite rule: [a,b] split into ncells uniform cells, npoints Gauss each.
template <typename F>
double gauss_composite(F&& f, double a, double b, int ncells, int npoints) {
    const double h = (b - a) / ncells;
    double acc = 0.0;
    for (int c = 0; c < ncells; ++c) {
        acc += gauss_integrate(f, a + c * h, a + (c + 1) * h, npoints);
    }
    return acc;
}

}  // namespace spdelab
