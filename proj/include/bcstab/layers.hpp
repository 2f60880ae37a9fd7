#pragma once

#include <bcstab/evolution.hpp>
#include <bcstab/gaussian.hpp>
#include <bcstab/hypothesis.hpp>
#include <bcstab/numeric.hpp>
#include <bcstab/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace bcstab {

/// |v(t)| <= C e^{-c t} on the fitted window.
struct ExpFit {
    double C = 0.0;
    double c = 0.0;
};

/// Layer magnitudes below this are treated as identically zero.
inline constexpr double kVanishingLayer = 1e-12;

struct BoundaryLayerProfile {
    enum class Provenance { Analytic, Empirical };
    Provenance provenance = Provenance::Analytic;
    int rc_first = 1;                 ///< j of rc[0]
    std::vector<cplx> rc;
    std::optional<ExpFit> rc_fit;     ///< empty when rc vanishes identically
    int j0_max = 0, j_max = 0;
    std::vector<cplx> ru;             ///< ru[(j0 - 1) * j_max + (j - 1)]
    std::optional<ExpFit> ru_fit;
    std::vector<std::string> warnings;

    cplx ru_at(int j0, int j) const {
        return ru[static_cast<std::size_t>((j0 - 1) * j_max + (j - 1))];
    }
};

namespace detail {

inline MatrixXc adjugate(const MatrixXc& A) {
    const Eigen::Index r = A.rows();
    MatrixXc adj(r, r);
    if (r == 1) {
        adj(0, 0) = 1.0;
        return adj;
    }
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j) {
            MatrixXc minor(r - 1, r - 1);
            for (Eigen::Index a = 0, ma = 0; a < r; ++a) {
                if (a == j) continue;
                for (Eigen::Index b = 0, mb = 0; b < r; ++b) {
                    if (b == i) continue;
                    minor(ma, mb++) = A(a, b);
                }
                ++ma;
            }
            adj(i, j) = (((i + j) % 2) ? -1.0 : 1.0) * minor.determinant();
        }
    return adj;
}

/// Fit on points (t_i, |v_i|) restricted to the last 20% of the t range.
inline std::optional<ExpFit> fit_tail(const std::vector<double>& t, const std::vector<double>& mag) {
    if (t.empty()) return std::nullopt;
    const double tmin = *std::min_element(t.begin(), t.end()), tmax = *std::max_element(t.begin(), t.end());
    const double cut = tmax - 0.2 * (tmax - tmin);
    std::vector<double> ft, fy;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= cut && mag[i] > 1e-290) {
            ft.push_back(t[i]);
            fy.push_back(mag[i]);
        }
    // Fall back to the whole window when the tail has underflowed.
    if (ft.size() < 2) {
        ft.clear();
        fy.clear();
        for (std::size_t i = 0; i < t.size(); ++i)
            if (mag[i] > 1e-290) {
                ft.push_back(t[i]);
                fy.push_back(mag[i]);
            }
    }
    if (ft.empty()) return std::nullopt;
    ExpFit f;
    if (ft.size() == 1 || ft.front() == ft.back()) f.c = 1.0;
    else f.c = exp_decay_fit(ft, fy).second;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (mag[i] > 0.0) f.C = std::max(f.C, mag[i] * std::exp(f.c * t[i]));
    return f;
}

}  // namespace detail

/// Modal representation of the boundary layers at z = 1:
///   R^c(j)     = sum_k c_k kappa_k^{j-1+r}
///   R^u(j0, j) = sum_k sum_m g_{km} mu_m^{-j0} kappa_k^{j-1+r}
/// with kappa_k the stable and mu_m the strictly unstable eigenvalues of M(1).
class LayerModel {
public:
    explicit LayerModel(const SchemeDefinition& s, std::vector<cplx> basis_scales = {},
                        const HypothesisOneOptions& h1 = {})
        : s_(s), h1_(check_hypothesis_one(s, h1)) {
        if (!h1_.satisfied) throw PreconditionError("LayerModel: Hypothesis 1 fails: " + h1_.failure);
        gauss_.emplace(GaussianParams{h1_.mu, h1_.beta});

        const StableBasis basis = stable_basis(s, 1.0);
        if (basis_scales.empty()) basis_scales.assign(static_cast<std::size_t>(s.r), 1.0);
        std::vector<VectorXc> vecs = basis.vectors;
        cplx prod = 1.0;
        for (std::size_t k = 0; k < vecs.size(); ++k) {
            vecs[k] *= basis_scales[k];
            prod *= basis_scales[k];
        }
        kappa_ = basis.eigenvalues;
        delta_prime_ = prod * lopatinskii_derivative_at_one(s);
        const ProjectorSet P = projector_set(s, 1.0);
        pi_c_e_ = P.pi_c * P.e;

        const MatrixXc B = boundary_matrix(s).entries.cast<cplx>();
        const MatrixXc D = detail::adjugate(boundary_images(s, vecs)) / delta_prime_;
        const double ap = s.coeff(s.p);

        // Coefficients of the p-th entry: vecs[k] carries kappa^{r} times its scale there.
        auto pth = [&](std::size_t k) { return vecs[k](s.p - 1) / std::pow(kappa_[k], s.r); };

        const VectorXc cc = -D * (B * pi_c_e_) / ap;
        for (std::size_t k = 0; k < kappa_.size(); ++k) c_.push_back(cc(static_cast<Eigen::Index>(k)) * pth(k));

        mu_ = P.su_eigen;
        g_.assign(kappa_.size(), std::vector<cplx>(mu_.size(), 0.0));
        for (std::size_t m = 0; m < mu_.size(); ++m) {
            const VectorXc gm = -D * (B * P.su_right[m]) * P.su_left[m](0) / ap;
            for (std::size_t k = 0; k < kappa_.size(); ++k) g_[k][m] = gm(static_cast<Eigen::Index>(k)) * pth(k);
        }
    }

    const SchemeDefinition& scheme() const { return s_; }
    const HypothesisReport& hypothesis() const { return h1_; }
    const GeneralizedGaussian& gaussian() const { return *gauss_; }
    double alpha() const { return h1_.alpha; }
    int mu() const { return h1_.mu; }
    cplx delta_prime() const { return delta_prime_; }
    const VectorXc& pi_c_e() const { return pi_c_e_; }

    cplx rc(int j) const {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < kappa_.size(); ++k) acc += c_[k] * std::pow(kappa_[k], j - 1 + s_.r);
        return acc;
    }
    cplx ru(int j0, int j) const {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < kappa_.size(); ++k) {
            cplx dk = 0.0;
            for (std::size_t m = 0; m < mu_.size(); ++m) dk += g_[k][m] * std::pow(mu_[m], -j0);
            acc += dk * std::pow(kappa_[k], j - 1 + s_.r);
        }
        return acc;
    }
    /// Argument of the activation coefficient E((j0 + n alpha) / n^{1/2mu}).
    double activation_argument(int n, int j0) const {
        return (j0 + n * alpha()) / std::pow(static_cast<double>(n), 1.0 / (2.0 * mu()));
    }
    cplx activation(int n, int j0) const {
        if (n == 0) return 0.0;
        return gauss_->E(activation_argument(n, j0));
    }

private:
    SchemeDefinition s_;
    HypothesisReport h1_;
    std::optional<GeneralizedGaussian> gauss_;
    std::vector<cplx> kappa_, mu_, c_;
    std::vector<std::vector<cplx>> g_;
    cplx delta_prime_;
    VectorXc pi_c_e_;
};

inline BoundaryLayerProfile rc_analytic(const LayerModel& m, int J_max) {
    if (J_max < 1) throw DomainError("rc_analytic: J_max must be >= 1");
    BoundaryLayerProfile prof;
    std::vector<double> t, mag;
    for (int j = 1; j <= J_max; ++j) {
        prof.rc.push_back(m.rc(j));
        t.push_back(j);
        mag.push_back(std::abs(prof.rc.back()));
    }
    // A vanishing layer evaluates to rounding noise; no decay law to fit.
    if (*std::max_element(mag.begin(), mag.end()) > kVanishingLayer) prof.rc_fit = detail::fit_tail(t, mag);
    return prof;
}

inline BoundaryLayerProfile rc_analytic(const SchemeDefinition& s, int J_max) { return rc_analytic(LayerModel(s), J_max); }

inline BoundaryLayerProfile ru_analytic(const LayerModel& m, int j0_max, int j_max) {
    if (j0_max < 1 || j_max < 1) throw DomainError("ru_analytic: grid must be nonempty");
    BoundaryLayerProfile prof;
    prof.j0_max = j0_max;
    prof.j_max = j_max;
    std::vector<double> t, mag;
    for (int j0 = 1; j0 <= j0_max; ++j0)
        for (int j = 1; j <= j_max; ++j) {
            prof.ru.push_back(m.ru(j0, j));
            t.push_back(j0 + j);
            mag.push_back(std::abs(prof.ru.back()));
        }
    prof.ru_fit = detail::fit_tail(t, mag);
    return prof;
}

inline BoundaryLayerProfile ru_analytic(const SchemeDefinition& s, int j0_max, int j_max) {
    return ru_analytic(LayerModel(s), j0_max, j_max);
}

/// (G(n, j0, .) - G~(n, . - j0) - 1_{np >= j0} R^u(j0, .)) / E(...) on [j_lo, j_hi].
inline BoundaryLayerProfile rc_empirical(const LayerModel& m, int j0, int n, int j_lo, int j_hi) {
    const auto& s = m.scheme();
    if (j_lo < 1 || j_hi < j_lo) throw DomainError("rc_empirical: invalid window");
    BoundaryLayerProfile prof;
    prof.provenance = BoundaryLayerProfile::Provenance::Empirical;
    prof.rc_first = j_lo;
    if (n < 10.0 * j0 / std::abs(m.alpha())) prof.warnings.push_back("n below 10 j0 / |alpha|: boundary layer not fully activated");
    const auto G = temporal_green(s, n, j0);
    const auto Gt = temporal_green_whole(s, n);
    const bool on = static_cast<long>(n) * s.p >= j0;
    const cplx act = m.activation(n, j0);
    std::vector<double> t, mag;
    for (int j = j_lo; j <= j_hi; ++j) {
        cplx v = G.field(j) - Gt.field(j - j0);
        if (n > 0) {
            if (on) v -= m.ru(j0, j);
            v /= act;
        }
        prof.rc.push_back(v);
        t.push_back(j);
        mag.push_back(std::abs(v));
    }
    if (n == 0) prof.warnings.push_back("n = 0: raw difference returned");
    prof.rc_fit = detail::fit_tail(t, mag);
    return prof;
}

struct ErrField {
    int n = 0;
    int j0 = 1;
    int j_lo = 1;
    std::vector<double> values;
};

inline ErrField err_field(const LayerModel& m, int n, int j0, int j_lo, int j_hi) {
    const auto& s = m.scheme();
    if (j_lo < 1 || j_hi < j_lo) throw DomainError("err_field: invalid window");
    const auto G = temporal_green(s, n, j0);
    const auto Gt = temporal_green_whole(s, n);
    const bool on = static_cast<long>(n) * s.p >= j0;
    const cplx act = m.activation(n, j0);
    ErrField e{n, j0, j_lo, {}};
    for (int j = j_lo; j <= j_hi; ++j) {
        cplx v = G.field(j) - Gt.field(j - j0) - act * m.rc(j);
        if (on) v -= m.ru(j0, j);
        e.values.push_back(v.real());
    }
    return e;
}

// ---------------------------------------------------------------------------

struct ErrMapPoint {
    int n;
    int j0;
    int j;
    double err;
};

/// Err(n, j0, j) on the grid, with G taken from the transposed evolution.
inline std::vector<ErrMapPoint> err_map(const LayerModel& m, const std::vector<int>& n_list,
                                        const std::vector<int>& j0_list, const std::vector<int>& j_list) {
    if (n_list.empty() || j0_list.empty() || j_list.empty()) throw DomainError("err_map: grids must be nonempty");
    const auto& s = m.scheme();
    const int n_max = *std::max_element(n_list.begin(), n_list.end());
    const int j0_max = *std::max_element(j0_list.begin(), j0_list.end());
    std::vector<int> ns = n_list;
    std::sort(ns.begin(), ns.end());

    // Whole-line Green function at the requested times.
    std::vector<WholeLineField> whole;
    {
        WholeLineField f = WholeLineField::dirac();
        std::size_t next = 0;
        for (int n = 0; n <= n_max && next < ns.size(); ++n) {
            while (next < ns.size() && ns[next] == n) {
                whole.push_back(f);
                ++next;
            }
            f = apply_whole_line(s, f);
        }
    }
    auto whole_at = [&](int n) -> const WholeLineField& {
        return whole[static_cast<std::size_t>(std::lower_bound(ns.begin(), ns.end(), n) - ns.begin())];
    };

    std::vector<ErrMapPoint> out;
    for (int j : j_list) {
        const auto row = green_row(s, j, j0_max, n_max);
        for (int n : n_list)
            for (int j0 : j0_list) {
                const double G = row[static_cast<std::size_t>(n)][static_cast<std::size_t>(j0 - 1)];
                cplx v = G - whole_at(n)(j - j0) - m.activation(n, j0) * m.rc(j);
                if (static_cast<long>(n) * s.p >= j0) v -= m.ru(j0, j);
                out.push_back({n, j0, j, v.real()});
            }
    }
    return out;
}

struct ErrFitCandidate {
    double c0 = 0.0;
    std::vector<int> octave;         ///< floor(log2 n)
    std::vector<double> octave_sup;  ///< sup of the normalized quantity in each octave
    bool accepted = false;
};

struct ErrFitReport {
    double growth_factor = 1.5;
    std::optional<double> c0;  ///< largest accepted trial value
    std::vector<ErrFitCandidate> candidates;
};

inline std::vector<double> default_c0_grid() {
    std::vector<double> g;
    for (double c = 0.005; c <= 2.0; c *= 1.25) g.push_back(c);
    return g;
}

/// log of n^{1/2mu} |Err| e^{c0 j} exp(c0 (|n alpha + j0| / n^{1/2mu})^{2mu/(2mu-1)}); -inf for Err = 0.
inline double err_log_weight(const LayerModel& m, const ErrMapPoint& p, double c0) {
    if (p.err == 0.0 || p.n == 0) return -INFINITY;
    const double mu = m.mu();
    const double sc = std::pow(static_cast<double>(p.n), 1.0 / (2.0 * mu));
    const double y = std::abs(p.n * m.alpha() + p.j0) / sc;
    return std::log(sc * std::abs(p.err)) + c0 * p.j + c0 * std::pow(y, 2.0 * mu / (2.0 * mu - 1.0));
}

/// Accepts c0 when every later octave's sup stays within growth_factor of the
/// largest sup over the earlier half of the octaves.
inline ErrFitReport err_bound_fit(const LayerModel& m, const std::vector<ErrMapPoint>& pts,
                                  const std::vector<double>& c0_grid = default_c0_grid(), double growth_factor = 1.5) {
    if (pts.empty()) throw DomainError("err_bound_fit: empty grid");
    ErrFitReport rep;
    rep.growth_factor = growth_factor;
    for (double c0 : c0_grid) {
        ErrFitCandidate cand;
        cand.c0 = c0;
        std::vector<std::pair<int, double>> sup;  // octave -> log sup
        for (const auto& p : pts) {
            if (p.n < 1) continue;
            const int oct = static_cast<int>(std::floor(std::log2(static_cast<double>(p.n))));
            const double w = err_log_weight(m, p, c0);
            auto it = std::find_if(sup.begin(), sup.end(), [&](const auto& q) { return q.first == oct; });
            if (it == sup.end()) sup.emplace_back(oct, w);
            else it->second = std::max(it->second, w);
        }
        std::sort(sup.begin(), sup.end());
        bool finite = true;
        for (const auto& [o, w] : sup) {
            cand.octave.push_back(o);
            cand.octave_sup.push_back(std::exp(w));
            finite = finite && std::isfinite(std::exp(w));
        }
        const std::size_t half = (sup.size() + 1) / 2;
        double early = -INFINITY, late = -INFINITY;
        for (std::size_t i = 0; i < sup.size(); ++i) {
            double& slot = i < half ? early : late;
            slot = std::max(slot, sup[i].second);
        }
        cand.accepted = finite && sup.size() >= 2 && late <= early + std::log(growth_factor);
        if (cand.accepted) rep.c0 = c0;
        rep.candidates.push_back(std::move(cand));
    }
    return rep;
}

struct AsymptoticRow {
    int n;
    double sup;
    double scaled;
};

/// sup_j |G~(n, j) - n^{-1/2mu} H((j - n alpha) / n^{1/2mu})| for each n.
inline std::vector<AsymptoticRow> whole_line_asymptotic_check(const LayerModel& m, const std::vector<int>& n_list) {
    const auto& s = m.scheme();
    const auto& g = m.gaussian();
    std::vector<AsymptoticRow> out;
    std::vector<int> ns = n_list;
    std::sort(ns.begin(), ns.end());
    WholeLineField f = WholeLineField::dirac();
    int cur = 0;
    for (int n : ns) {
        if (n < 1) throw DomainError("whole_line_asymptotic_check: n must be >= 1");
        for (; cur < n; ++cur) f = apply_whole_line(s, f);
        const double sc = std::pow(static_cast<double>(n), 1.0 / (2.0 * m.mu()));
        double sup = 0.0;
        for (int j = f.j_min; j <= f.j_max(); ++j) {
            const double x = (j - n * m.alpha()) / sc;
            const double h = std::abs(x) > 4.0 * g.tail_cut() ? 0.0 : g.H(x).real();
            sup = std::max(sup, std::abs(f(j) - h / sc));
        }
        out.push_back({n, sup, sc * sup});
    }
    return out;
}

}  // namespace bcstab
