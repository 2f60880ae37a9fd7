#pragma once

#include <bcstab/scheme.hpp>

#include <random>

namespace bcstab::test {

inline SchemeDefinition lfr(double b = 5.0) { return builtin_lfr(-0.5, 0.75, b); }
inline SchemeDefinition o3() { return builtin_o3_stable(-0.5); }

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

/// LFR parameters drawn from the admissible window, with the boundary value
/// chosen so that Delta(1) = 0.
inline SchemeDefinition random_admissible_lfr(std::mt19937_64& g) {
    for (;;) {
        const double alpha = uniform(g, -0.9, -0.1);
        const double D = uniform(g, alpha * alpha + 0.05, 0.95);
        if (!(D > alpha * alpha && D < 1.0) || std::abs(D + alpha) < 1e-3) continue;
        const double ks = (D + alpha) / (D - alpha);
        if (std::abs(ks) < 0.05) continue;
        return builtin_lfr(alpha, D, 1.0 / ks);
    }
}

}  // namespace bcstab::test
