#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace feasops::rng {

// Counter-based generation: every draw is a pure function of
// (seed, index, slot), so sample i of a stream is reproducible no matter
// how or in what order the stream is consumed.

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
    return splitmix64(splitmix64(seed ^ splitmix64(index)) + slot);
}

/// Uniform in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
    return static_cast<double>(mix(seed, index, slot) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; uses slots (2k, 2k+1).
inline double gaussian(std::uint64_t seed, std::uint64_t index, std::uint64_t k) {
    // u1 in (0,1] so the log is finite.
    const double u1 = static_cast<double>((mix(seed, index, 2 * k) >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform01(seed, index, 2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// Unit direction in R^dim (normalized Gaussian vector).
inline Eigen::VectorXd unit_direction(std::uint64_t seed, std::uint64_t index, int dim) {
    Eigen::VectorXd g(dim);
    for (int j = 0; j < dim; ++j) g[j] = gaussian(seed, index, static_cast<std::uint64_t>(j));
    const double n = g.norm();
    if (n < 1e-300) {
        g.setZero();
        g[0] = 1.0;
        return g;
    }
    return g / n;
}

} // namespace feasops::rng
