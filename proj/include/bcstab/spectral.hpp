#pragma once

#include <bcstab/hypothesis.hpp>
#include <bcstab/polynomial.hpp>
#include <bcstab/scheme.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace bcstab {

using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

/// Roots of kappa^r (F(kappa) - z), i.e. eigenvalues of the companion matrix M(z).
inline std::vector<cplx> characteristic_roots(const SchemeDefinition& s, cplx z) {
    return polynomial_roots(characteristic_polynomial(s, z));
}

/// Companion matrix of the spatial recurrence (z - T) w = 0.
inline MatrixXc companion_matrix(const SchemeDefinition& s, cplx z) {
    const int d = s.width();
    MatrixXc M = MatrixXc::Zero(d, d);
    const double ap = s.coeff(s.p);
    for (int c = 0; c < d; ++c) {
        const int k = s.p - 1 - c;
        M(0, c) = ((k == 0 ? z : cplx(0.0)) - s.coeff(k)) / ap;
    }
    for (int i = 1; i < d; ++i) M(i, i - 1) = 1.0;
    return M;
}

/// (kappa^{d-1}, ..., kappa, 1)^T.
inline VectorXc vandermonde(cplx kappa, int d) {
    VectorXc v(d);
    cplx pw = 1.0;
    for (int i = d - 1; i >= 0; --i) {
        v(i) = pw;
        pw *= kappa;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Location of z relative to the symbol curve F(S^1).

enum class Region { InsideO, OnCurve, AtOne, Other };

inline const char* to_string(Region r) {
    switch (r) {
        case Region::InsideO: return "inside-O";
        case Region::OnCurve: return "on-curve";
        case Region::AtOne: return "at-one";
        default: return "other";
    }
}

struct RegionOptions {
    int curve_points = 4096;
    double at_one_tol = 1e-12;
    double curve_tol = 1e-8;
    int rays = 64;
};

/// Sampled polyline of F(e^{i theta}).
inline std::vector<cplx> symbol_curve(const SchemeDefinition& s, int m) {
    std::vector<cplx> pts(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k < m; ++k)
        pts[static_cast<std::size_t>(k)] = symbol_eval(s, std::polar(1.0, 2.0 * std::numbers::pi * k / m));
    pts.back() = pts.front();
    return pts;
}

inline double distance_to_polyline(const std::vector<cplx>& pts, cplx z) {
    double best = INFINITY;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const cplx a = pts[k], d = pts[k + 1] - pts[k];
        const double len2 = std::norm(d);
        double t = len2 > 0.0 ? std::real((z - a) * std::conj(d)) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, std::abs(z - (a + t * d)));
    }
    return best;
}

inline Region classify_region(const SchemeDefinition& s, cplx z, const RegionOptions& o = {}) {
    if (std::abs(z - 1.0) < o.at_one_tol) return Region::AtOne;
    const auto pts = symbol_curve(s, o.curve_points);
    if (distance_to_polyline(pts, z) < o.curve_tol) return Region::OnCurve;
    for (int k = 0; k < o.rays; ++k) {
        const cplx dir = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / o.rays);
        bool hit = false;
        for (std::size_t i = 0; i + 1 < pts.size() && !hit; ++i) {
            // Solve z + t dir = a + u (b - a), t >= 0, u in [0, 1].
            const cplx a = pts[i] - z, e = pts[i + 1] - pts[i];
            const double det = dir.real() * (-e.imag()) - dir.imag() * (-e.real());
            if (det == 0.0) continue;
            const double t = (a.real() * (-e.imag()) - a.imag() * (-e.real())) / det;
            const double u = (dir.real() * a.imag() - dir.imag() * a.real()) / det;
            hit = t >= 0.0 && u >= 0.0 && u <= 1.0;
        }
        if (!hit) return Region::InsideO;
    }
    return Region::Other;
}

// ---------------------------------------------------------------------------

struct SpectralSplit {
    cplx z;
    std::vector<cplx> stable;
    std::vector<cplx> unstable;
    std::optional<cplx> central;
    Region region = Region::Other;
    std::vector<std::string> warnings;
};

inline void sort_modulus_arg(std::vector<cplx>& v) {
    std::sort(v.begin(), v.end(), [](cplx x, cplx y) {
        const double ax = std::abs(x), ay = std::abs(y);
        if (ax != ay) return ax < ay;
        return std::arg(x) < std::arg(y);
    });
}

inline SpectralSplit spectral_split(const SchemeDefinition& s, cplx z, double unit_tol = 1e-8,
                                    const RegionOptions& ro = {}) {
    SpectralSplit out;
    out.z = z;
    out.region = classify_region(s, z, ro);
    std::vector<cplx> band;
    for (cplx k : characteristic_roots(s, z)) {
        const double m = std::abs(k);
        if (m < 1.0 - unit_tol) out.stable.push_back(k);
        else if (m > 1.0 + unit_tol) out.unstable.push_back(k);
        else band.push_back(k);
    }
    sort_modulus_arg(out.stable);
    sort_modulus_arg(out.unstable);
    if (out.region == Region::InsideO && !band.empty())
        throw ClassificationError("spectral_split: root on the unit circle for z in O (too close to the essential spectrum)");
    if (band.size() > 1) out.warnings.push_back("several roots within the unit-circle band");
    if (!band.empty()) {
        out.central = band.front();
        if (out.region == Region::AtOne) out.central = 1.0;
    }
    const auto ns = out.stable.size(), nu = out.unstable.size();
    if (out.region == Region::InsideO &&
        (ns != static_cast<std::size_t>(s.r) || nu != static_cast<std::size_t>(s.p)))
        throw ClassificationError("spectral_split: stable/unstable counts differ from (r, p) in O");
    if (out.region == Region::AtOne &&
        (ns != static_cast<std::size_t>(s.r) || nu != static_cast<std::size_t>(s.p - 1) || band.size() != 1))
        throw ClassificationError("spectral_split: counts at z = 1 differ from (r, 1, p - 1)");
    return out;
}

// ---------------------------------------------------------------------------

struct StableBasis {
    cplx z;
    std::vector<VectorXc> vectors;
    std::vector<cplx> eigenvalues;
};

inline void check_distinct(const std::vector<cplx>& v, double gap = 1e-8) {
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t k = i + 1; k < v.size(); ++k)
            if (std::abs(v[i] - v[k]) <= gap)
                throw UnsupportedMultiplicity("clustered eigenvalues (gap <= 1e-8)");
}

inline StableBasis basis_from_roots(const SchemeDefinition& s, cplx z, std::vector<cplx> roots) {
    check_distinct(roots);
    StableBasis b;
    b.z = z;
    b.eigenvalues = std::move(roots);
    for (cplx k : b.eigenvalues) b.vectors.push_back(vandermonde(k, s.width()));
    return b;
}

inline StableBasis stable_basis(const SchemeDefinition& s, cplx z, double unit_tol = 1e-8) {
    std::vector<cplx> st;
    for (cplx k : characteristic_roots(s, z))
        if (std::abs(k) < 1.0 - unit_tol) st.push_back(k);
    if (st.size() != static_cast<std::size_t>(s.r))
        throw ClassificationError("stable_basis: expected r stable eigenvalues");
    sort_modulus_arg(st);
    return basis_from_roots(s, z, std::move(st));
}

/// Columns B e_k for a list of vectors.
inline MatrixXc boundary_images(const SchemeDefinition& s, const std::vector<VectorXc>& vecs) {
    const MatrixXc B = boundary_matrix(s).entries.cast<cplx>();
    MatrixXc out(s.r, static_cast<Eigen::Index>(vecs.size()));
    for (std::size_t k = 0; k < vecs.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = B * vecs[k];
    return out;
}

struct LopatinskiiValue {
    cplx z;
    cplx delta;
    std::string basis_id = "vandermonde/modulus-arg";
};

inline cplx lopatinskii_of(const SchemeDefinition& s, const StableBasis& b) {
    return boundary_images(s, b.vectors).determinant();
}

inline LopatinskiiValue lopatinskii(const SchemeDefinition& s, cplx z) {
    return {z, lopatinskii_of(s, stable_basis(s, z))};
}

namespace detail {

/// Follows each root of `from` to its nearest neighbour in `to`.
inline std::vector<cplx> track_roots(const std::vector<cplx>& from, const std::vector<cplx>& to) {
    std::vector<cplx> out;
    std::vector<bool> used(to.size(), false);
    for (cplx k : from) {
        std::size_t best = 0;
        double d1 = INFINITY, d2 = INFINITY;
        for (std::size_t i = 0; i < to.size(); ++i) {
            const double d = std::abs(to[i] - k);
            if (d < d1) {
                d2 = d1;
                d1 = d;
                best = i;
            } else if (d < d2) {
                d2 = d;
            }
        }
        if (d1 > 0.5 * d2 || used[best]) throw TrackingError("root tracking is ambiguous");
        used[best] = true;
        out.push_back(to[best]);
    }
    return out;
}

}  // namespace detail

/// Delta'(1) by central differences with root tracking and Richardson extrapolation.
inline cplx lopatinskii_derivative_at_one(const SchemeDefinition& s, double h = 1e-3,
                                          double zero_tol = 1e-8) {
    const StableBasis b1 = stable_basis(s, 1.0);
    const cplx d1 = lopatinskii_of(s, b1);
    const double scale = 1.0 + boundary_matrix(s).entries.cwiseAbs().maxCoeff();
    if (std::abs(d1) > zero_tol * scale)
        throw PreconditionError("lopatinskii_derivative_at_one: Delta(1) does not vanish");

    auto delta_at = [&](double zz) {
        const auto tracked = detail::track_roots(b1.eigenvalues, characteristic_roots(s, zz));
        return lopatinskii_of(s, basis_from_roots(s, zz, tracked));
    };
    auto central = [&](double hh) { return (delta_at(1.0 + hh) - delta_at(1.0 - hh)) / (2.0 * hh); };

    cplx prev_d = central(h), prev_r = prev_d;
    bool have_r = false;
    for (int it = 0; it < 16; ++it) {
        h *= 0.5;
        const cplx d = central(h);
        const cplx rich = (4.0 * d - prev_d) / 3.0;
        if (have_r && std::abs(rich - prev_r) < 1e-6 * std::abs(rich)) return rich;
        prev_d = d;
        prev_r = rich;
        have_r = true;
    }
    return prev_r;
}

// ---------------------------------------------------------------------------

struct ProjectorSet {
    cplx z;
    MatrixXc pi_ss, pi_c, pi_su;
    VectorXc left_central;
    VectorXc central_vector;
    VectorXc e;
    cplx kappa_c;
    std::vector<cplx> ss_eigen, su_eigen;
    /// Rank-one pieces, for powers of M restricted to a class.
    std::vector<VectorXc> ss_right, ss_left, su_right, su_left;
    double condition = 0.0;
};

inline ProjectorSet projector_set(const SchemeDefinition& s, cplx z, double cond_limit = 1e10) {
    const int d = s.width();
    auto roots = characteristic_roots(s, z);
    check_distinct(roots);
    std::size_t ic = 0;
    for (std::size_t i = 1; i < roots.size(); ++i)
        if (std::abs(roots[i] - 1.0) < std::abs(roots[ic] - 1.0)) ic = i;

    MatrixXc V(d, d);
    for (int k = 0; k < d; ++k) V.col(k) = vandermonde(roots[static_cast<std::size_t>(k)], d);
    Eigen::JacobiSVD<MatrixXc> svd(V);
    const auto sv = svd.singularValues();
    const double cond = sv(0) / sv(d - 1);
    if (!(cond <= cond_limit)) throw ConditioningError("projector_set: eigenvector matrix ill-conditioned");
    const MatrixXc W = V.inverse();

    ProjectorSet P;
    P.z = z;
    P.condition = cond;
    P.pi_ss = P.pi_c = P.pi_su = MatrixXc::Zero(d, d);
    P.e = VectorXc::Zero(d);
    P.e(0) = 1.0;
    P.kappa_c = roots[ic];
    for (int k = 0; k < d; ++k) {
        const VectorXc right = V.col(k);
        const VectorXc left = W.row(k).transpose();
        const MatrixXc piece = right * left.transpose();
        const cplx kap = roots[static_cast<std::size_t>(k)];
        if (static_cast<std::size_t>(k) == ic) {
            P.pi_c = piece;
            P.left_central = left;
            P.central_vector = right;
        } else if (std::abs(kap) < 1.0) {
            P.pi_ss += piece;
            P.ss_eigen.push_back(kap);
            P.ss_right.push_back(right);
            P.ss_left.push_back(left);
        } else {
            P.pi_su += piece;
            P.su_eigen.push_back(kap);
            P.su_right.push_back(right);
            P.su_left.push_back(left);
        }
    }
    if (P.ss_eigen.size() != static_cast<std::size_t>(s.r) ||
        P.su_eigen.size() != static_cast<std::size_t>(s.p - 1))
        throw ClassificationError("projector_set: z is not in the neighbourhood of 1 where the splitting holds");
    return P;
}

// ---------------------------------------------------------------------------

/// Orthogonal residual of y against the column span of A, with rank cut `rank_tol`.
inline double span_residual(const MatrixXc& A, const VectorXc& y, double rank_tol) {
    if (A.cols() == 0) return y.norm();
    Eigen::JacobiSVD<MatrixXc> svd(A, Eigen::ComputeThinU);
    VectorXc res = y;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        if (svd.singularValues()(k) <= rank_tol) continue;
        const VectorXc u = svd.matrixU().col(k);
        res -= u * u.dot(y);
    }
    return res.norm();
}

/// Whether B(1..1)^T lies in span{B e_k(1)}.
inline bool residue_condition(const SchemeDefinition& s, double tol = 1e-10) {
    const StableBasis b = stable_basis(s, 1.0);
    const MatrixXc A = boundary_images(s, b.vectors);
    const MatrixXc B = boundary_matrix(s).entries.cast<cplx>();
    const VectorXc ones = VectorXc::Ones(s.width());
    const VectorXc y = B * ones;
    // Relative to the natural size of B 1, not |B 1|, which may itself be rounding noise.
    const double scale = B.norm() * ones.norm();
    if (y.norm() <= tol * scale) return true;
    double vmax = 0.0;
    for (const auto& v : b.vectors) vmax = std::max(vmax, v.norm());
    const double rank_tol = 1e-8 * B.norm() * vmax;
    return span_residual(A, y, rank_tol) < tol * scale;
}

// ---------------------------------------------------------------------------

inline constexpr const char* kVerdictStable = "ℓ^q-stable for all q";
inline constexpr const char* kVerdictUnstable = "ℓ¹-stable, ℓ^q-unstable for q>1";

struct HypothesisTwoOptions {
    int samples = 256;
    std::vector<double> radii = {1.0, 1.25, 1.5, 2.0, 3.0};
    double exclude = 0.05;   ///< radius of the excluded arc around 1 on the unit circle
    double zero_tol = 1e-6;  ///< |Delta| below this on the sampled set is a violation
    double delta_one_tol = 1e-8;
    double derivative_h = 1e-3;
    double residue_tol = 1e-10;
};

struct RadiusSample {
    double radius = 0.0;
    int evaluated = 0;
    int skipped = 0;
    double min_abs_delta = INFINITY;
    cplx witness;
};

struct HypothesisTwoReport {
    bool satisfied = false;
    std::vector<std::string> violations;
    std::vector<RadiusSample> radii;
    cplx delta_at_one;
    std::optional<cplx> delta_prime;
    std::optional<bool> residue;
    std::string verdict;
};

inline HypothesisTwoReport check_hypothesis_two(const SchemeDefinition& s,
                                                const HypothesisTwoOptions& o = {},
                                                const HypothesisOneOptions& h1 = {}) {
    if (!check_hypothesis_one(s, h1).satisfied)
        throw PreconditionError("check_hypothesis_two: Hypothesis 1 is not satisfied");
    HypothesisTwoReport rep;
    for (double R : o.radii) {
        if (R < 1.0) throw DomainError("check_hypothesis_two: radii must be >= 1");
        RadiusSample rs;
        rs.radius = R;
        for (int k = 0; k < o.samples; ++k) {
            const cplx z = std::polar(R, 2.0 * std::numbers::pi * k / o.samples);
            if (std::abs(z - 1.0) < o.exclude) {
                ++rs.skipped;
                continue;
            }
            try {
                const double a = std::abs(lopatinskii(s, z).delta);
                ++rs.evaluated;
                if (a < rs.min_abs_delta) {
                    rs.min_abs_delta = a;
                    rs.witness = z;
                }
            } catch (const UnsupportedMultiplicity&) {
                ++rs.skipped;
            } catch (const ClassificationError&) {
                ++rs.skipped;
            }
        }
        if (rs.min_abs_delta < o.zero_tol) rep.violations.push_back("Delta vanishes near sampled z (Godunov-Ryabenkii)");
        rep.radii.push_back(rs);
    }
    rep.delta_at_one = lopatinskii(s, 1.0).delta;
    const double scale = 1.0 + boundary_matrix(s).entries.cwiseAbs().maxCoeff();
    if (std::abs(rep.delta_at_one) > o.delta_one_tol * scale) {
        rep.violations.push_back("Delta(1) does not vanish");
    } else {
        rep.delta_prime = lopatinskii_derivative_at_one(s, o.derivative_h, o.delta_one_tol);
        if (std::abs(*rep.delta_prime) < 1e-8) rep.violations.push_back("Delta'(1) vanishes");
        rep.residue = residue_condition(s, o.residue_tol);
    }
    rep.satisfied = rep.violations.empty();
    if (rep.satisfied) rep.verdict = *rep.residue ? kVerdictStable : kVerdictUnstable;
    else rep.verdict = "hypothesis 2 fails";
    return rep;
}

}  // namespace bcstab
