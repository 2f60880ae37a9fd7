#pragma once

#include <bcstab/error.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace bcstab {

struct RootOptions {
    double target = 1e-13;   ///< relative residual aimed for
    double accept = 1e-12;   ///< relative residual required on exit
    int max_iter = 500;
};

namespace detail {

/// p(x) and p'(x) by Horner, plus the scale sum |c_k||x|^k for relative residuals.
inline void horner(const std::vector<std::complex<double>>& c, std::complex<double> x,
                   std::complex<double>& val, std::complex<double>& der, double& scale) {
    val = 0.0;
    der = 0.0;
    scale = 0.0;
    const double ax = std::abs(x);
    for (std::size_t i = c.size(); i-- > 0;) {
        der = der * x + val;
        val = val * x + c[i];
        scale = scale * ax + std::abs(c[i]);
    }
}

}  // namespace detail

/// All roots of sum_k c[k] x^k by Aberth-Ehrlich iteration with a Newton polish.
inline std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> c,
                                                          const RootOptions& opt = {}) {
    using C = std::complex<double>;
    while (!c.empty() && c.back() == C(0.0)) c.pop_back();
    if (c.size() < 2) throw DomainError("polynomial_roots: degree must be >= 1");
    if (c.front() == C(0.0)) throw DomainError("polynomial_roots: zero constant term");
    const int n = static_cast<int>(c.size()) - 1;
    if (n == 1) return {-c[0] / c[1]};

    const double rad = std::pow(std::abs(c[0] / c[static_cast<std::size_t>(n)]), 1.0 / n);
    std::vector<C> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        z[static_cast<std::size_t>(k)] = std::polar(rad, 2.0 * std::numbers::pi * (k + 0.25) / n + 0.4);

    auto rel_residual = [&](C x) {
        C v, d;
        double sc;
        detail::horner(c, x, v, d, sc);
        return std::abs(v) / sc;
    };

    std::vector<double> trace;
    for (int it = 0; it < opt.max_iter; ++it) {
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
            C v, d;
            double sc;
            detail::horner(c, z[static_cast<std::size_t>(k)], v, d, sc);
            worst = std::max(worst, std::abs(v) / sc);
            if (v == C(0.0)) continue;
            const C ratio = v / d;
            C rep = 0.0;
            for (int m = 0; m < n; ++m)
                if (m != k) rep += 1.0 / (z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>(m)]);
            z[static_cast<std::size_t>(k)] -= ratio / (1.0 - ratio * rep);
        }
        trace.push_back(worst);
        if (worst < opt.target) break;
    }

    for (auto& x : z) {
        for (int s = 0; s < 3; ++s) {
            C v, d;
            double sc;
            detail::horner(c, x, v, d, sc);
            if (v == C(0.0) || d == C(0.0)) break;
            const C nx = x - v / d;
            if (rel_residual(nx) <= rel_residual(x)) x = nx;
            else break;
        }
    }

    double worst = 0.0;
    for (const auto& x : z) worst = std::max(worst, rel_residual(x));
    if (!(worst < opt.accept)) {
        trace.push_back(worst);
        throw NumericError("polynomial_roots: no convergence, residual " + std::to_string(worst),
                           std::move(trace));
    }
    return z;
}

}  // namespace bcstab
