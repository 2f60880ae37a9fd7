#pragma once

#include <bcstab/scheme.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace bcstab {

struct HypothesisOneOptions {
    int order = 8;
    int grid_size = 100000;
    double tol = 1e-12;        ///< consistency residual |F(1) - 1|
    double coeff_tol = 1e-8;   ///< nonvanishing threshold for series coefficients
    double crossover = 1e-2;   ///< |t| below this is left to the series
};

struct HypothesisReport {
    bool satisfied = false;
    std::string failure;       ///< empty when satisfied
    double alpha = 0.0;
    int mu = 0;
    cplx beta = 0.0;
    double consistency_residual = 0.0;
    double dissipativity_margin = 0.0;
    std::optional<double> witness_t;
    std::vector<cplx> series;  ///< coefficients of log F(e^{it}) + i alpha t
};

/// Taylor coefficients of log F(e^{it}) at t = 0, orders 0..order.
inline std::vector<cplx> log_symbol_series(const SchemeDefinition& s, int order) {
    std::vector<cplx> c(static_cast<std::size_t>(order + 1));
    double fact = 1.0;
    for (int m = 0; m <= order; ++m) {
        if (m > 0) fact *= m;
        cplx acc = 0.0;
        for (int j = -s.r; j <= s.p; ++j) acc += s.coeff(j) * std::pow(cplx(0.0, j), m);
        c[static_cast<std::size_t>(m)] = acc / fact;
    }
    std::vector<cplx> L(c.size());
    L[0] = std::log(c[0]);
    for (int m = 1; m <= order; ++m) {
        cplx acc = c[static_cast<std::size_t>(m)];
        for (int k = 1; k < m; ++k)
            acc -= static_cast<double>(k) / m * L[static_cast<std::size_t>(k)] *
                   c[static_cast<std::size_t>(m - k)];
        L[static_cast<std::size_t>(m)] = acc / c[0];
    }
    return L;
}

inline HypothesisReport check_hypothesis_one(const SchemeDefinition& s,
                                             const HypothesisOneOptions& opt = {}) {
    if (opt.order < 2) throw DomainError("check_hypothesis_one: order must be >= 2");
    if (opt.grid_size < 1000) throw DomainError("check_hypothesis_one: grid_size must be >= 1000");

    HypothesisReport rep;
    double sum = 0.0, drift = 0.0;
    for (int j = -s.r; j <= s.p; ++j) {
        sum += s.coeff(j);
        drift += j * s.coeff(j);
    }
    rep.alpha = -drift;
    rep.consistency_residual = std::abs(sum - 1.0);

    rep.series = log_symbol_series(s, opt.order);
    rep.series[1] += cplx(0.0, rep.alpha);

    int first = 0;
    for (int m = 2; m <= opt.order; ++m)
        if (std::abs(rep.series[static_cast<std::size_t>(m)]) > opt.coeff_tol) {
            first = m;
            break;
        }

    // Dissipativity on the sampled circle away from t = 0.
    double margin = INFINITY;
    std::optional<double> witness;
    for (int k = 0; k < opt.grid_size; ++k) {
        const double t = -std::numbers::pi + 2.0 * std::numbers::pi * (k + 0.5) / opt.grid_size;
        if (std::abs(t) < opt.crossover) continue;
        const double m = 1.0 - std::abs(symbol_eval(s, std::polar(1.0, t)));
        if (m < margin) {
            margin = m;
            if (m <= 0.0) witness = t;
        }
    }
    rep.dissipativity_margin = margin;

    auto fail = [&](std::string why) {
        rep.satisfied = false;
        rep.failure = std::move(why);
        return rep;
    };
    if (rep.consistency_residual > opt.tol) return fail("consistency: |F(1) - 1| exceeds tolerance");
    if (first == 0) return fail("diffusivity: no nonvanishing coefficient up to the series order");
    if (first % 2 != 0) return fail("diffusivity: first nonvanishing coefficient has odd order");
    rep.mu = first / 2;
    rep.beta = -rep.series[static_cast<std::size_t>(first)];
    if (!(rep.beta.real() > 0.0)) return fail("diffusivity: Re(beta) <= 0");
    if (margin <= 0.0) {
        rep.witness_t = witness;
        return fail("dissipativity: |F(e^{it})| >= 1 at a sampled t != 0");
    }
    if (!(rep.alpha > -s.p && rep.alpha < 0.0)) return fail("drift: alpha outside ]-p, 0[");
    rep.satisfied = true;
    return rep;
}

}  // namespace bcstab
