#pragma once

#include <bcstab/banded.hpp>
#include <bcstab/spectral.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

namespace bcstab {

struct ResolventField {
    cplx z;
    std::optional<int> j0;
    int first_index = 0;        ///< index of values[0]
    std::vector<cplx> values;
    double truncation_residual = 0.0;
    double condition = 0.0;
    int nodes = 0;              ///< Fourier nodes (whole line only)

    cplx operator()(int j) const {
        const int i = j - first_index;
        if (i < 0 || i >= static_cast<int>(values.size())) return 0.0;
        return values[static_cast<std::size_t>(i)];
    }
    int last_index() const { return first_index + static_cast<int>(values.size()) - 1; }
};

struct HalfResolventOptions {
    double cond_limit = 1e10;
    double tail_target = 1e-14;  ///< relative tail size that triggers window extension
    int max_extensions = 3;
};

namespace detail {

/// Banded system for (z - T) w = delta_{j0} on 1-r..J with ghost rows and w_{J+1..} = 0.
inline BandedMatrix<cplx> half_line_system(const SchemeDefinition& s, cplx z, int J) {
    const int n = J + s.r;
    BandedMatrix<cplx> A(n, s.r, std::max(s.p, s.p_b + s.r - 1));
    auto col = [&](int m) { return m + s.r - 1; };
    for (int j = 1 - s.r; j <= 0; ++j) {
        A.at(col(j), col(j)) += 1.0;
        for (int k = 1; k <= s.p_b; ++k) A.at(col(j), col(k)) -= s.boundary(k, j);
    }
    for (int i = 1; i <= J; ++i) {
        A.at(col(i), col(i)) += z;
        for (int k = -s.r; k <= s.p; ++k)
            if (i + k <= J) A.at(col(i), col(i + k)) -= s.coeff(k);
    }
    return A;
}

}  // namespace detail

/// Solves (z - T) G = delta_{j0} on the truncated half-line.
inline ResolventField spatial_green_half(const SchemeDefinition& s, cplx z, int j0, int J_trunc,
                                         const HalfResolventOptions& o = {}) {
    if (j0 < 1) throw DomainError("spatial_green_half: j0 must be >= 1");
    if (J_trunc < j0 + 200) throw DomainError("spatial_green_half: J_trunc must be >= j0 + 200");
    double suma = 0.0;
    for (int k = -s.r; k <= s.p; ++k) suma += std::abs(s.coeff(k));

    int J = J_trunc;
    for (int ext = 0;; ++ext) {
        BandedLU<cplx> lu(detail::half_line_system(s, z, J));
        if (lu.singular()) throw NearSpectrumError("spatial_green_half: singular system (z in the spectrum)");
        const double cond = lu.condition_estimate();
        if (!(cond <= o.cond_limit)) throw NearSpectrumError("spatial_green_half: ill-conditioned system (z too close to the spectrum)");
        std::vector<cplx> rhs(static_cast<std::size_t>(J + s.r), 0.0);
        rhs[static_cast<std::size_t>(j0 + s.r - 1)] = 1.0;

        ResolventField f;
        f.z = z;
        f.j0 = j0;
        f.first_index = 1 - s.r;
        f.values = lu.solve(std::move(rhs));
        f.condition = cond;

        double inner = 0.0, tail = 0.0, scale = 0.0;
        for (const auto& v : f.values) scale = std::max(scale, std::abs(v));
        const int inner_end = static_cast<int>(0.8 * J);
        for (int i = 1; i <= inner_end; ++i) {
            cplx acc = z * f(i) - (i == j0 ? 1.0 : 0.0);
            for (int k = -s.r; k <= s.p; ++k) acc -= s.coeff(k) * f(i + k);
            inner = std::max(inner, std::abs(acc));
        }
        for (int j = J - s.p + 1; j <= J; ++j) tail = std::max(tail, std::abs(f(j)));
        f.truncation_residual = std::max(inner, suma * tail);
        if (tail <= o.tail_target * scale || ext >= o.max_extensions) return f;
        J *= 2;
    }
}

/// Whole-line resolvent from residues of the characteristic polynomial.
inline std::vector<cplx> whole_line_resolvent_residues(const SchemeDefinition& s, cplx z, int j_lo, int j_hi) {
    const auto c = characteristic_polynomial(s, z);
    const auto roots = characteristic_roots(s, z);
    auto dP = [&](cplx k) {
        cplx acc = 0.0;
        for (std::size_t i = c.size() - 1; i >= 1; --i) acc = acc * k + static_cast<double>(i) * c[i];
        return acc;
    };
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(j_hi - j_lo + 1));
    for (int j = j_lo; j <= j_hi; ++j) {
        cplx acc = 0.0;
        const int e = j - 1 + s.r;
        for (cplx k : roots) {
            const bool inside = std::abs(k) < 1.0;
            if (e >= 0 && inside) acc -= std::pow(k, e) / dP(k);
            if (e < 0 && !inside) acc += std::pow(k, e) / dP(k);
        }
        out.push_back(acc);
    }
    return out;
}

struct WholeResolventOptions {
    double curve_tol = 1e-8;
    double target = 1e-10;
    int start_nodes = 256;
    int max_nodes = 1 << 22;
};

/// (z - L)^{-1} delta_0 on [j_lo, j_hi] by trapezoid quadrature on the unit circle.
inline ResolventField spatial_green_whole(const SchemeDefinition& s, cplx z, int j_lo, int j_hi,
                                          const WholeResolventOptions& o = {}) {
    if (j_hi < j_lo) throw DomainError("spatial_green_whole: empty window");
    const int lo = j_lo - s.r, hi = j_hi + s.p;
    // The trapezoid sum is the N-periodized Green function, which satisfies the
    // recurrence exactly; the residual cannot detect aliasing, so N is chosen
    // from the root moduli: the wrapped tail sum |kappa|^{N-span} / (1 - |kappa|^N) / |P'(kappa)|.
    const auto c = characteristic_polynomial(s, z);
    auto dP = [&](cplx k) {
        cplx acc = 0.0;
        for (std::size_t i = c.size() - 1; i >= 1; --i) acc = acc * k + static_cast<double>(i) * c[i];
        return acc;
    };
    const auto roots = characteristic_roots(s, z);
    // z lies on F(S^1) exactly when a root lies on the unit circle.
    for (cplx k : roots)
        if (std::abs(std::abs(k) - 1.0) < o.curve_tol)
            throw NearSpectrumError("spatial_green_whole: z too close to the symbol curve");
    const int span = std::max(std::abs(lo), std::abs(hi)) + s.r + s.p;
    auto alias = [&](int N) {
        double bound = 0.0;
        for (cplx k : roots) {
            const double rho = std::min(std::abs(k), 1.0 / std::abs(k));
            bound += std::pow(rho, N - span) / (1.0 - std::pow(rho, N)) / std::abs(dP(k));
        }
        return bound;
    };
    int N0 = o.start_nodes;
    while (N0 <= o.max_nodes && alias(N0) > o.target) N0 *= 2;
    for (int N = N0; N <= o.max_nodes; N *= 2) {
        std::vector<cplx> g(static_cast<std::size_t>(hi - lo + 1), 0.0);
        for (int m = 0; m < N; ++m) {
            const double th = 2.0 * std::numbers::pi * m / N;
            const cplx w = std::polar(1.0, th);
            const cplx f = 1.0 / (z - symbol_eval(s, w));
            cplx ph = std::polar(1.0, lo * th);
            for (auto& v : g) {
                v += f * ph;
                ph *= w;
            }
        }
        for (auto& v : g) v /= static_cast<double>(N);

        ResolventField out;
        out.z = z;
        out.first_index = lo;
        out.values = g;
        out.nodes = N;
        double res = 0.0;
        for (int j = j_lo; j <= j_hi; ++j) {
            cplx acc = z * out(j) - (j == 0 ? 1.0 : 0.0);
            for (int k = -s.r; k <= s.p; ++k) acc -= s.coeff(k) * out(j + k);
            res = std::max(res, std::abs(acc));
        }
        if (res < o.target) {
            out.truncation_residual = res;
            out.values.assign(g.begin() + (j_lo - lo), g.begin() + (j_hi - lo + 1));
            out.first_index = j_lo;
            return out;
        }
    }
    throw QuadratureError("spatial_green_whole: node budget exhausted");
}

/// R(z, j0, j) = G(z, j0, j) - G~(z, j - j0) for j in [j_lo, j_hi].
inline std::vector<cplx> r_function_window(const SchemeDefinition& s, cplx z, int j0, int j_lo, int j_hi) {
    const auto half = spatial_green_half(s, z, j0, std::max(j0, j_hi) + 200);
    const auto whole = spatial_green_whole(s, z, j_lo - j0, j_hi - j0);
    std::vector<cplx> out;
    for (int j = j_lo; j <= j_hi; ++j) out.push_back(half(j) - whole(j - j0));
    return out;
}

inline cplx r_function(const SchemeDefinition& s, cplx z, int j0, int j) {
    return r_function_window(s, z, j0, j, j)[0];
}

// ---------------------------------------------------------------------------
// Inverse Laplace transform on the circle |z| = e^{r0}.

struct ContourOptions {
    double tol = 1e-9;
    int max_nodes = 1 << 16;
    int start_nodes = 0;  ///< 0: 4 (n + p + r)
};

struct ContourTable {
    /// values[n][i] for n = 0..n_max and the i-th output of the node evaluator
    std::vector<std::vector<cplx>> values;
    int nodes = 0;
    double max_imag = 0.0;
};

/// (1/N) sum_m z_m^{n+1} g(z_m) with node doubling; g returns `count` values per node.
inline ContourTable contour_table(const std::function<std::vector<cplx>(cplx)>& g, int n_max, std::size_t count,
                                  double r0, int start, const ContourOptions& o) {
    if (!(r0 > 0.0)) throw DomainError("inverse Laplace: r0 must be positive");
    std::vector<std::vector<cplx>> cache;  // node m of the current level
    auto node = [&](int m, int N) { return std::polar(std::exp(r0), 2.0 * std::numbers::pi * m / N); };
    auto assemble = [&](int N) {
        std::vector<std::vector<cplx>> out(static_cast<std::size_t>(n_max + 1), std::vector<cplx>(count, 0.0));
        for (int m = 0; m < N; ++m) {
            const cplx z = node(m, N);
            cplx zp = z;
            for (int n = 0; n <= n_max; ++n) {
                for (std::size_t i = 0; i < count; ++i) out[static_cast<std::size_t>(n)][i] += zp * cache[static_cast<std::size_t>(m)][i];
                zp *= z;
            }
        }
        for (auto& row : out)
            for (auto& v : row) v /= static_cast<double>(N);
        return out;
    };
    int N = start;
    for (int m = 0; m < N; ++m) cache.push_back(g(node(m, N)));
    auto prev = assemble(N);
    while (2 * N <= o.max_nodes) {
        std::vector<std::vector<cplx>> next(static_cast<std::size_t>(2 * N));
        for (int m = 0; m < N; ++m) next[static_cast<std::size_t>(2 * m)] = std::move(cache[static_cast<std::size_t>(m)]);
        for (int m = 0; m < N; ++m) next[static_cast<std::size_t>(2 * m + 1)] = g(node(2 * m + 1, 2 * N));
        cache = std::move(next);
        N *= 2;
        auto cur = assemble(N);
        double change = 0.0;
        for (std::size_t n = 0; n < cur.size(); ++n)
            for (std::size_t i = 0; i < count; ++i) change = std::max(change, std::abs(cur[n][i] - prev[n][i]));
        prev = std::move(cur);
        if (change < o.tol) {
            ContourTable t;
            t.values = std::move(prev);
            t.nodes = N;
            for (const auto& row : t.values)
                for (const auto& v : row) t.max_imag = std::max(t.max_imag, std::abs(v.imag()));
            return t;
        }
    }
    throw QuadratureError("inverse Laplace: no convergence within the node budget");
}

/// G(n, j0, j) for n = 0..n_max and j = 1..j_max from the half-line resolvent.
inline ContourTable inverse_laplace_table(const SchemeDefinition& s, int n_max, int j0, int j_max, double r0,
                                          const ContourOptions& o = {}) {
    const int J = std::max(j0, j_max) + 200;
    auto g = [&](cplx z) {
        const auto f = spatial_green_half(s, z, j0, J);
        std::vector<cplx> v;
        for (int j = 1; j <= j_max; ++j) v.push_back(f(j));
        return v;
    };
    const int start = o.start_nodes > 0 ? o.start_nodes : 4 * (n_max + s.p + s.r);
    return contour_table(g, n_max, static_cast<std::size_t>(j_max), r0, start, o);
}

/// G~(n, j) for n = 0..n_max and j in [j_lo, j_hi] from the whole-line resolvent.
inline ContourTable inverse_laplace_whole_table(const SchemeDefinition& s, int n_max, int j_lo, int j_hi, double r0,
                                                const ContourOptions& o = {}) {
    auto g = [&](cplx z) { return whole_line_resolvent_residues(s, z, j_lo, j_hi); };
    const int start = o.start_nodes > 0 ? o.start_nodes : 4 * (n_max + s.p + s.r);
    return contour_table(g, n_max, static_cast<std::size_t>(j_hi - j_lo + 1), r0, start, o);
}

struct ContourValue {
    cplx value;
    double imag = 0.0;
    int nodes = 0;
};

inline ContourValue inverse_laplace_reconstruct(const SchemeDefinition& s, int n, int j0, int j, double r0,
                                                int N = 0, const ContourOptions& o = {}) {
    if (n < 0 || j0 < 1 || j < 1) throw DomainError("inverse_laplace_reconstruct: invalid indices");
    const int J = std::max(j0, j) + 200;
    auto g = [&](cplx z) { return std::vector<cplx>{spatial_green_half(s, z, j0, J)(j)}; };
    const int start = N > 0 ? N : 4 * (n + s.p + s.r);
    const auto t = contour_table(g, n, 1, r0, start, o);
    const cplx v = t.values[static_cast<std::size_t>(n)][0];
    return {v, std::abs(v.imag()), t.nodes};
}

}  // namespace bcstab
