#include "spdelab/rng.hpp"

#include <cmath>

namespace spdelab::rng {

double standard_normal(std::uint64_t w1, std::uint64_t w2) {
    const double u1 = uniform01_open_left(w1);
    const double u2 = uniform01(w2);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace spdelab::rng
