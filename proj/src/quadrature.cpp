#include "spdelab/quadrature.hpp"

#include <stdexcept>
#include <vector>

namespace spdelab {
namespace {

// Gauss-Legendre abscissae/weights, positive half; mirrored on use.
// Values to 16 significant digits.
constexpr double n1[] = {0.0};
constexpr double w1[] = {2.0};

constexpr double n2[] = {0.5773502691896257};
constexpr double w2[] = {1.0};

constexpr double n3[] = {0.0, 0.7745966692414834};
constexpr double w3[] = {0.8888888888888888, 0.5555555555555556};

constexpr double n4[] = {0.3399810435848563, 0.8611363115940526};
constexpr double w4[] = {0.6521451548625461, 0.3478548451374538};

constexpr double n5[] = {0.0, 0.5384693101056831, 0.9061798459386640};
constexpr double w5[] = {0.5688888888888889, 0.4786286704993665, 0.2369268850561891};

constexpr double n6[] = {0.2386191860831969, 0.6612093864662645, 0.9324695142031521};
constexpr double w6[] = {0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

constexpr double n8[] = {0.1834346424956498, 0.5255324099163290,
                         0.7966664774136267, 0.9602898564975363};
constexpr double w8[] = {0.3626837833783620, 0.3137066458778873,
                         0.2223810344533745, 0.1012285362903763};

constexpr double n10[] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                          0.8650633666889845, 0.9739065285171717};
constexpr double w10[] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                          0.1494513491505806, 0.0666713443086881};

constexpr double n12[] = {0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
                          0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
constexpr double w12[] = {0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                          0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

struct FullRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    FullRule(std::span<const double> half_n, std::span<const double> half_w, bool has_zero) {
        // negative nodes first, zero (if present), then positive
        for (std::size_t i = half_n.size(); i-- > 0;) {
            if (has_zero && i == 0) continue;
            nodes.push_back(-half_n[i]);
            weights.push_back(half_w[i]);
        }
        if (has_zero) {
            nodes.push_back(0.0);
            weights.push_back(half_w[0]);
        }
        for (std::size_t i = has_zero ? 1 : 0; i < half_n.size(); ++i) {
            nodes.push_back(half_n[i]);
            weights.push_back(half_w[i]);
        }
    }
};

const FullRule& full_rule(int npoints) {
    static const FullRule r1(n1, w1, true);
    static const FullRule r2(n2, w2, false);
    static const FullRule r3(n3, w3, true);
    static const FullRule r4(n4, w4, false);
    static const FullRule r5(n5, w5, true);
    static const FullRule r6(n6, w6, false);
    static const FullRule r8(n8, w8, false);
    static const FullRule r10(n10, w10, false);
    static const FullRule r12(n12, w12, false);
    switch (npoints) {
        case 1: return r1;
        case 2: return r2;
        case 3: return r3;
        case 4: return r4;
        case 5: return r5;
        case 6: return r6;
        case 7:
        case 8: return r8;
        case 9:
        case 10: return r10;
        case 11:
        case 12: return r12;
        default: throw std::invalid_argument("GaussRule: unsupported point count");
    }
}

}  // namespace

GaussRule GaussRule::of_order(int npoints) {
    const FullRule& r = full_rule(npoints);
    return GaussRule{std::span<const double>(r.nodes), std::span<const double>(r.weights)};
}

}  // namespace spdelab
