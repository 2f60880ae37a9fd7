#pragma once

#include <bcstab/error.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace bcstab {

using cplx = std::complex<double>;

/// Explicit one-step scheme on the half-line j >= 1 with ghost cells 1-r..0.
///
/// Interior: u^{n+1}_j = sum_{k=-r}^{p} a_k u^n_{j+k}.
/// Ghosts:   u_j = sum_{k=1}^{p_b} b_{k,j} u_k for j in {1-r..0}.
struct SchemeDefinition {
    int r = 1;
    int p = 1;
    std::vector<double> a;               ///< a[k + r] = a_k, k = -r..p
    int p_b = 0;
    std::vector<std::vector<double>> b;  ///< b[g][k - 1] = b_{k, -g}, g = 0..r-1
    double lambda = 1.0;
    double v = -1.0;
    std::string id = "custom";

    double coeff(int k) const {
        return (k < -r || k > p) ? 0.0 : a[static_cast<std::size_t>(k + r)];
    }
    /// b_{k,j} for ghost j in {1-r..0} and k in 1..p_b.
    double boundary(int k, int j) const {
        if (k < 1 || k > p_b || j > 0 || j < 1 - r) return 0.0;
        return b[static_cast<std::size_t>(-j)][static_cast<std::size_t>(k - 1)];
    }
    int width() const { return p + r; }

    /// Checks the structural invariants; throws ConstructionError.
    void validate() const {
        if (r < 1 || p < 1) throw ConstructionError("r and p must be >= 1");
        if (a.size() != static_cast<std::size_t>(p + r + 1))
            throw ConstructionError("a must hold p + r + 1 coefficients");
        if (coeff(-r) == 0.0 || coeff(p) == 0.0)
            throw ConstructionError("a_{-r} and a_p must be nonzero");
        if (p_b < 0 || p_b > p) throw ConstructionError("p_b must lie in 0..p");
        if (b.size() != static_cast<std::size_t>(r))
            throw ConstructionError("b must hold r rows");
        for (const auto& row : b)
            if (row.size() != static_cast<std::size_t>(p_b))
                throw ConstructionError("each row of b must hold p_b entries");
        for (double x : a)
            if (!std::isfinite(x)) throw ConstructionError("non-finite coefficient");
        for (const auto& row : b)
            for (double x : row)
                if (!std::isfinite(x)) throw ConstructionError("non-finite boundary coefficient");
        if (!(lambda > 0.0)) throw ConstructionError("lambda must be positive");
        if (!(v < 0.0)) throw ConstructionError("v must be negative");
    }
};

/// F(kappa) = sum_j a_j kappa^j.
inline cplx symbol_eval(const SchemeDefinition& s, cplx kappa) {
    if (kappa == cplx(0.0)) throw DomainError("symbol_eval: kappa must be nonzero");
    // Horner on kappa^r F(kappa), then divide.
    cplx acc = 0.0;
    for (int k = s.p; k >= -s.r; --k) acc = acc * kappa + s.coeff(k);
    return acc / std::pow(kappa, s.r);
}

/// Coefficients (ascending powers) of kappa^r (F(kappa) - z).
inline std::vector<cplx> characteristic_polynomial(const SchemeDefinition& s, cplx z) {
    std::vector<cplx> c(static_cast<std::size_t>(s.p + s.r + 1));
    for (int k = -s.r; k <= s.p; ++k) c[static_cast<std::size_t>(k + s.r)] = s.coeff(k);
    c[static_cast<std::size_t>(s.r)] -= z;
    return c;
}

/// r x (p + r) boundary matrix acting on (u_p, ..., u_{1-r})^T.
struct BoundaryMatrix {
    Eigen::MatrixXd entries;
    /// Column holding u_j.
    static int column(const SchemeDefinition& s, int j) { return s.p - j; }
};

inline BoundaryMatrix boundary_matrix(const SchemeDefinition& s) {
    BoundaryMatrix B{Eigen::MatrixXd::Zero(s.r, s.p + s.r)};
    for (int g = 0; g < s.r; ++g) {
        const int j = -g;
        B.entries(g, BoundaryMatrix::column(s, j)) = 1.0;
        for (int k = 1; k <= s.p_b; ++k)
            B.entries(g, BoundaryMatrix::column(s, k)) = -s.boundary(k, j);
    }
    return B;
}

/// Modified Lax-Friedrichs scheme with ghost u_0 = b u_1.
inline SchemeDefinition builtin_lfr(double alpha, double D, double b) {
    if (!(alpha * alpha < D && D < 1.0) || D == -alpha)
        throw ConstructionError("builtin_lfr: need alpha^2 < D < 1 and D != -alpha");
    SchemeDefinition s;
    s.r = 1;
    s.p = 1;
    s.a = {(D + alpha) / 2.0, 1.0 - D, (D - alpha) / 2.0};
    s.p_b = 1;
    s.b = {{b}};
    s.lambda = 1.0;
    s.v = alpha;
    s.id = "lfr";
    s.validate();
    return s;
}

/// Third order scheme, stencil -1..2, ghost u_0 = b1 u_1 + b2 u_2.
inline SchemeDefinition builtin_o3(double alpha, double b1, double b2) {
    if (!(alpha > -1.0 && alpha < 0.0))
        throw ConstructionError("builtin_o3: need alpha in ]-1, 0[");
    const double a2 = alpha * alpha;
    SchemeDefinition s;
    s.r = 1;
    s.p = 2;
    s.a = {alpha * (1.0 + alpha) * (2.0 + alpha) / 6.0,
           (1.0 - a2) * (2.0 + alpha) / 2.0,
           -alpha * (1.0 - alpha) * (2.0 + alpha) / 2.0,
           alpha * (1.0 - a2) / 6.0};
    s.p_b = 2;
    s.b = {{b1, b2}};
    s.lambda = 1.0;
    s.v = alpha;
    s.id = "o3";
    s.validate();
    return s;
}

/// Stable root at z = 1 of the O3 characteristic cubic, after deflating kappa = 1.
inline double o3_stable_root(double alpha) {
    const SchemeDefinition s = builtin_o3(alpha, 0.0, 0.0);
    // kappa (F - 1) = c0 + c1 k + c2 k^2 + c3 k^3 = (k - 1)(q0 + q1 k + q2 k^2)
    const double c3 = s.coeff(2), c2 = s.coeff(1), c1 = s.coeff(0) - 1.0;
    const double q2 = c3, q1 = c2 + q2, q0 = c1 + q1;
    const double disc = std::sqrt(q1 * q1 - 4.0 * q2 * q0);
    const double k1 = (-q1 + disc) / (2.0 * q2), k2 = (-q1 - disc) / (2.0 * q2);
    return std::abs(k1) < std::abs(k2) ? k1 : k2;
}

/// O3 with the boundary choice b1 = (1 + k)/k, b2 = -1/k, k the stable root at 1.
inline SchemeDefinition builtin_o3_stable(double alpha) {
    const double ks = o3_stable_root(alpha);
    return builtin_o3(alpha, (1.0 + ks) / ks, -1.0 / ks);
}

}  // namespace bcstab
