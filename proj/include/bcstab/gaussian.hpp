#pragma once

#include <bcstab/error.hpp>
#include <bcstab/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <tuple>
#include <vector>

namespace bcstab {

struct GaussianParams {
    int mu = 1;
    std::complex<double> beta = 0.25;

    void validate() const {
        if (mu < 1) throw DomainError("GaussianParams: mu must be >= 1");
        if (!(beta.real() > 0.0)) throw DomainError("GaussianParams: Re(beta) must be positive");
    }
};

/// H(x) = (1/2pi) int e^{iux} e^{-beta u^{2mu}} du and E(x) = int_x^inf H.
///
/// Both are trapezoid sums over [0, U] using evenness of the envelope,
/// E via 1/2 - (1/pi) int_0^U e^{-beta u^{2mu}} sin(ux)/u du.
class GeneralizedGaussian {
public:
    explicit GeneralizedGaussian(GaussianParams p, int min_nodes = 2048) : p_(p), min_nodes_(min_nodes) {
        p_.validate();
        U_ = std::pow(40.0 / p_.beta.real(), 1.0 / (2.0 * p_.mu));
        build(min_nodes_, base_);
        // Beyond x_tail both H and E are below roundoff and E is returned exactly.
        x_tail_ = 0.0;
        for (double x = 1.0; x < 1e4; x += 0.5) {
            bool small = true;
            for (int k = 0; k < 10 && small; ++k) {
                const double y = x + 0.5 * k;
                small = std::abs(raw_e(y)) < 1e-15 && std::abs(H(y)) < 1e-15;
            }
            if (small) {
                x_tail_ = x;
                break;
            }
        }
        if (x_tail_ == 0.0) throw QuadratureError("GeneralizedGaussian: tail cut not found");
    }

    const GaussianParams& params() const { return p_; }
    double truncation() const { return U_; }
    double tail_cut() const { return x_tail_; }

    std::complex<double> H(double x) const {
        const Grid& g = grid_for(x);
        CompensatedSum<std::complex<double>> acc;
        for (std::size_t k = 0; k < g.u.size(); ++k) acc.add(g.wenv[k] * std::cos(g.u[k] * x));
        return acc.value() / std::numbers::pi;
    }

    std::complex<double> E(double x) const {
        if (x < 0.0) return 1.0 - E(-x);
        if (x > x_tail_) return 0.0;
        return raw_e(x);
    }

private:
    struct Grid {
        std::vector<double> u;
        std::vector<std::complex<double>> wenv;  ///< trapezoid weight times envelope
    };

    void build(int nodes, Grid& g) const {
        const double h = U_ / nodes;
        g.u.resize(static_cast<std::size_t>(nodes) + 1);
        g.wenv.resize(g.u.size());
        for (int k = 0; k <= nodes; ++k) {
            const double u = k * h;
            const double w = (k == 0 || k == nodes) ? 0.5 * h : h;
            g.u[static_cast<std::size_t>(k)] = u;
            g.wenv[static_cast<std::size_t>(k)] = w * std::exp(-p_.beta * std::pow(u, 2 * p_.mu));
        }
    }

    const Grid& grid_for(double x) const {
        // At least 16 nodes per oscillation period over [0, U].
        const double need = 16.0 * U_ * std::abs(x) / (2.0 * std::numbers::pi);
        if (need <= min_nodes_) return base_;
        thread_local Grid scratch;
        thread_local std::tuple<double, double, int, int> key{-1.0, 0.0, 0, 0};
        int nodes = min_nodes_;
        while (nodes < need) nodes *= 2;
        const std::tuple<double, double, int, int> want{p_.beta.real(), p_.beta.imag(), p_.mu, nodes};
        if (key != want) {
            build(nodes, scratch);
            key = want;
        }
        return scratch;
    }

    std::complex<double> raw_e(double x) const {
        const Grid& g = grid_for(x);
        CompensatedSum<std::complex<double>> acc;
        acc.add(g.wenv[0] * x);
        for (std::size_t k = 1; k < g.u.size(); ++k) acc.add(g.wenv[k] * (std::sin(g.u[k] * x) / g.u[k]));
        return 0.5 - acc.value() / std::numbers::pi;
    }

    GaussianParams p_;
    int min_nodes_;
    double U_ = 0.0;
    double x_tail_ = 0.0;
    Grid base_;
};

inline std::complex<double> gaussian_h(const GaussianParams& p, double x) { return GeneralizedGaussian(p).H(x); }
inline std::complex<double> gaussian_e(const GaussianParams& p, double x) { return GeneralizedGaussian(p).E(x); }

/// F(x, s) = int g(u, x, s) / (i (u + i s)) du, g = exp(i (u + is) x - beta (u + is)^{2mu}).
inline std::complex<double> appendix_f(const GaussianParams& p, double x, double s) {
    p.validate();
    if (!(s > 0.0)) throw DomainError("appendix_f: s must be positive");
    using C = std::complex<double>;
    const C I(0.0, 1.0);
    auto f = [&](double u) {
        const C w(u, s);
        return std::exp(I * w * x - p.beta * std::pow(w, 2 * p.mu)) / (I * w);
    };
    auto log_mag = [&](double u) {
        const C w(u, s);
        return std::real(I * w * x - p.beta * std::pow(w, 2 * p.mu)) - std::log(std::abs(w));
    };
    double U = 1.0;
    while (log_mag(U) > -45.0 || log_mag(-U) > -45.0) {
        U *= 1.25;
        if (U > 1e6) throw QuadratureError("appendix_f: integrand does not decay");
    }
    double h = std::min({2.0 * std::numbers::pi * s / 40.0, 2.0 * std::numbers::pi / (16.0 * (std::abs(x) + 1.0)),
                         U / 1024.0});
    auto trap = [&](double hh) {
        const long m = static_cast<long>(std::ceil(U / hh));
        CompensatedSum<C> acc;
        for (long k = -m; k <= m; ++k) acc.add(f(k * hh));
        return acc.value() * hh;
    };
    C prev = trap(h);
    for (int it = 0; it < 6; ++it) {
        h *= 0.5;
        const C cur = trap(h);
        if (std::abs(cur - prev) < 1e-11 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw QuadratureError("appendix_f: no convergence");
}

}  // namespace bcstab
