#include "common.hpp"

#include <bcstab/spectral.hpp>

#include <gtest/gtest.h>

#include <numbers>

using namespace bcstab;
using test::lfr;
using test::o3;

namespace {

bool contains(const std::vector<cplx>& v, cplx x, double tol) {
    for (cplx y : v)
        if (std::abs(x - y) < tol) return true;
    return false;
}

/// Samples z in the unbounded component, away from the symbol curve.
std::vector<cplx> sample_outer(const SchemeDefinition& s, int count, std::uint64_t seed) {
    auto g = test::rng(seed);
    const auto curve = symbol_curve(s, 4096);
    std::vector<cplx> out;
    while (static_cast<int>(out.size()) < count) {
        const cplx z = std::polar(test::uniform(g, 0.2, 3.0), test::uniform(g, -std::numbers::pi, std::numbers::pi));
        if (distance_to_polyline(curve, z) < 1e-3) continue;
        if (classify_region(s, z) != Region::InsideO) continue;
        out.push_back(z);
    }
    return out;
}

}  // namespace

TEST(Roots, ClosedForms) {
    auto r = characteristic_roots(lfr(), 1.0);
    EXPECT_TRUE(contains(r, 1.0, 1e-10));
    EXPECT_TRUE(contains(r, 0.2, 1e-10));
    r = characteristic_roots(lfr(), 2.0);
    EXPECT_TRUE(contains(r, (14 - std::sqrt(176.0)) / 10, 1e-10));
    EXPECT_TRUE(contains(r, (14 + std::sqrt(176.0)) / 10, 1e-10));
    r = characteristic_roots(o3(), 1.0);
    EXPECT_TRUE(contains(r, 1.0, 1e-10));
    EXPECT_TRUE(contains(r, 4 - std::sqrt(17.0), 1e-10));
    EXPECT_TRUE(contains(r, 4 + std::sqrt(17.0), 1e-10));
}

TEST(Roots, ResidualAndNonzero) {
    for (const auto& s : {lfr(), o3()})
        for (cplx z : sample_outer(s, 20, 5))
            for (cplx k : characteristic_roots(s, z)) {
                EXPECT_NE(k, cplx(0.0));
                EXPECT_LT(std::abs(symbol_eval(s, k) - z), 1e-11 * (1 + std::abs(z)));
            }
}

TEST(Roots, ScalingInvariance) {
    auto g = test::rng(17);
    for (int t = 0; t < 30; ++t) {
        auto s = o3();
        const cplx z = std::polar(test::uniform(g, 0.5, 3), test::uniform(g, -3, 3));
        const double c = test::uniform(g, 0.1, 10) * (t % 2 ? -1 : 1);
        auto a = characteristic_roots(s, z);
        auto coeffs = characteristic_polynomial(s, z);
        for (auto& x : coeffs) x *= c;
        auto b = polynomial_roots(coeffs);
        ASSERT_EQ(a.size(), b.size());
        for (cplx k : a) EXPECT_TRUE(contains(b, k, 1e-10));
    }
}

TEST(Roots, NonConvergenceReportsTrace) {
    RootOptions o;
    o.max_iter = 0;
    o.accept = 1e-300;
    try {
        polynomial_roots({1.0, 0.3, -2.0, 0.7, 1.0}, o);
        FAIL();
    } catch (const NumericError& e) {
        EXPECT_FALSE(e.trace.empty());
    }
}

TEST(Companion, DeterminantIsConstant) {
    for (const auto& s : {lfr(), o3()}) {
        const double expect = ((s.p + s.r) % 2 ? -1.0 : 1.0) * s.coeff(-s.r) / s.coeff(s.p);
        for (cplx z : sample_outer(s, 20, 8)) EXPECT_NEAR(std::abs(companion_matrix(s, z).determinant() - expect), 0.0, 1e-12);
    }
    for (cplx z : sample_outer(lfr(), 20, 9)) {
        const auto sp = spectral_split(lfr(), z);
        EXPECT_NEAR(std::abs(sp.stable[0] * sp.unstable[0] - 0.2), 0.0, 1e-12);
    }
}

TEST(Split, Examples) {
    auto sp = spectral_split(lfr(), 2.0);
    EXPECT_EQ(sp.stable.size(), 1u);
    EXPECT_EQ(sp.unstable.size(), 1u);
    EXPECT_EQ(sp.region, Region::InsideO);

    sp = spectral_split(lfr(), 1.0);
    EXPECT_EQ(sp.region, Region::AtOne);
    EXPECT_NEAR(std::abs(sp.stable[0] - 0.2), 0.0, 1e-12);
    ASSERT_TRUE(sp.central.has_value());
    EXPECT_EQ(*sp.central, cplx(1.0));
    EXPECT_TRUE(sp.unstable.empty());

    sp = spectral_split(o3(), 1.0);
    EXPECT_NEAR(std::abs(sp.stable[0] - (4 - std::sqrt(17.0))), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(sp.unstable[0] - (4 + std::sqrt(17.0))), 0.0, 1e-10);
    EXPECT_EQ(*sp.central, cplx(1.0));
}

TEST(Split, CountsOnSampledOuterRegion) {
    for (const auto& s : {lfr(), o3()})
        for (cplx z : sample_outer(s, 200, 2024)) {
            const auto sp = spectral_split(s, z);
            EXPECT_EQ(sp.stable.size(), static_cast<std::size_t>(s.r));
            EXPECT_EQ(sp.unstable.size(), static_cast<std::size_t>(s.p));
            EXPECT_FALSE(sp.central.has_value());
        }
}

TEST(Split, TooCloseToCurveIsClassificationError) {
    const auto s = lfr();
    const cplx on = symbol_eval(s, std::polar(1.0, 0.5));
    RegionOptions ro;
    ro.curve_tol = 0.0;
    // A point just outside the curve, where a root sits within the band.
    const cplx outward = on * (1.0 + 1e-11);
    ASSERT_EQ(classify_region(s, outward, ro), Region::InsideO);
    EXPECT_THROW(spectral_split(s, outward, 1e-8, ro), ClassificationError);
}

TEST(Basis, Examples) {
    auto b = stable_basis(lfr(), 1.0);
    ASSERT_EQ(b.vectors.size(), 1u);
    EXPECT_NEAR((b.vectors[0] - Eigen::Vector2cd(0.2, 1.0)).norm(), 0.0, 1e-12);
    const double ks = 4 - std::sqrt(17.0);
    b = stable_basis(o3(), 1.0);
    EXPECT_NEAR((b.vectors[0] - Eigen::Vector3cd(ks * ks, ks, 1.0)).norm(), 0.0, 1e-12);
}

TEST(Basis, EigenvectorResidual) {
    for (const auto& s : {lfr(), o3()})
        for (cplx z : sample_outer(s, 30, 31)) {
            const auto b = stable_basis(s, z);
            const auto M = companion_matrix(s, z);
            for (std::size_t k = 0; k < b.vectors.size(); ++k)
                EXPECT_LT((M * b.vectors[k] - b.eigenvalues[k] * b.vectors[k]).norm(), 1e-10);
        }
}

TEST(Basis, ClusteredEigenvaluesRejected) {
    EXPECT_THROW(check_distinct({0.3, 0.3 + 1e-9}), UnsupportedMultiplicity);
    EXPECT_NO_THROW(check_distinct({0.3, 0.31}));
}

TEST(Lopatinskii, Examples) {
    EXPECT_NEAR(std::abs(lopatinskii(lfr(), 1.0).delta), 0.0, 1e-12);
    EXPECT_NEAR(lopatinskii(lfr(), 2.0).delta.real(), 1 - 5 * (14 - std::sqrt(176.0)) / 10, 1e-12);
    EXPECT_NEAR(lopatinskii(lfr(), 2.0).delta.real(), 0.6332495807108, 1e-12);
    EXPECT_NEAR(std::abs(lopatinskii(o3(), 1.0).delta), 0.0, 1e-12);
}

TEST(Lopatinskii, DerivativeAtOne) {
    EXPECT_NEAR(std::abs(lopatinskii_derivative_at_one(lfr()) - 2.0), 0.0, 1e-6);
    // Closed form 8/sqrt(17) from implicit differentiation of the cubic.
    EXPECT_NEAR(std::abs(lopatinskii_derivative_at_one(o3()) - 1.9402850002906637882), 0.0, 1e-6);
    EXPECT_THROW(lopatinskii_derivative_at_one(lfr(1.0)), PreconditionError);
}

TEST(Lopatinskii, AmbiguousTrackingRejected) {
    EXPECT_THROW(detail::track_roots({0.0}, {1.0, -1.0}), TrackingError);
    EXPECT_NO_THROW(detail::track_roots({0.9}, {1.0, -1.0}));
}

TEST(LopatinskiiProperty, ZerosAndResidueInvariantUnderRescaling) {
    auto g = test::rng(55);
    for (const auto& s : {lfr(), o3()}) {
        const bool res = residue_condition(s);
        for (int t = 0; t < 20; ++t) {
            const cplx c = std::polar(test::uniform(g, 0.1, 10), test::uniform(g, -3, 3));
            auto b1 = stable_basis(s, 1.0);
            b1.vectors[0] *= c;
            EXPECT_LT(std::abs(lopatinskii_of(s, b1)), 1e-12 * std::abs(c) + 1e-14);
            auto b2 = stable_basis(s, 2.0);
            const cplx d2 = lopatinskii_of(s, b2);
            b2.vectors[0] *= c;
            EXPECT_NEAR(std::abs(lopatinskii_of(s, b2)), std::abs(c) * std::abs(d2), 1e-12 * std::abs(c));
            EXPECT_GT(std::abs(lopatinskii_of(s, b2)), 1e-3);

            const auto B = boundary_matrix(s).entries.cast<cplx>();
            MatrixXc A = boundary_images(s, stable_basis(s, 1.0).vectors) * c;
            const VectorXc y = B * VectorXc::Ones(s.width());
            const bool scaled = span_residual(A, y, 1e-8 * B.norm() * std::abs(c)) < 1e-10 * y.norm();
            EXPECT_EQ(scaled, res);
        }
    }
}

TEST(Projectors, LfrCentralImageOfE) {
    // Computed from the left/right eigenvectors at z = 1: l = (5/4, -1/4).
    const auto P = projector_set(lfr(), 1.0);
    const VectorXc v = P.pi_c * P.e;
    EXPECT_NEAR((v - Eigen::Vector2cd(1.25, 1.25)).norm(), 0.0, 1e-10);
    EXPECT_NEAR(P.pi_su.norm(), 0.0, 1e-12);
}

TEST(Projectors, CentralImageEqualsMinusApOverAlpha) {
    for (const auto& s : {lfr(), o3()}) {
        const auto P = projector_set(s, 1.0);
        const double alpha = -0.5;
        const double l1 = -s.coeff(s.p) / alpha;
        EXPECT_NEAR((P.pi_c * P.e - l1 * VectorXc::Ones(s.width())).norm(), 0.0, 1e-10) << s.id;
    }
}

TEST(Projectors, IdentitiesOnSampledZ) {
    auto g = test::rng(77);
    for (const auto& s : {lfr(), o3()})
        for (int t = 0; t < 30; ++t) {
            const cplx z = t == 0 ? cplx(1.0) : 1.0 + std::polar(test::uniform(g, 1e-4, 0.05), test::uniform(g, -3, 3));
            ProjectorSet P;
            try {
                P = projector_set(s, z);
            } catch (const ClassificationError&) {
                continue;
            }
            const int d = s.width();
            const MatrixXc I = MatrixXc::Identity(d, d), M = companion_matrix(s, z);
            EXPECT_LT((P.pi_ss + P.pi_c + P.pi_su - I).norm(), 1e-10);
            for (const MatrixXc* Q : {&P.pi_ss, &P.pi_c, &P.pi_su}) {
                EXPECT_LT((*Q * *Q - *Q).norm(), 1e-10);
                EXPECT_LT((*Q * M - M * *Q).norm(), 1e-10);
            }
            auto rank = [](const MatrixXc& A) {
                Eigen::JacobiSVD<MatrixXc> svd(A);
                int k = 0;
                for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) k += svd.singularValues()(i) > 1e-8;
                return k;
            };
            EXPECT_EQ(rank(P.pi_ss), s.r);
            EXPECT_EQ(rank(P.pi_c), 1);
            EXPECT_EQ(rank(P.pi_su), s.p - 1);
        }
}

TEST(Residue, Examples) {
    EXPECT_FALSE(residue_condition(lfr()));
    EXPECT_TRUE(residue_condition(o3()));
    // r = 1 with Delta(1) = 0: the condition reduces to B(1..1) = 0.
    const double ks = o3_stable_root(-0.5);
    const auto other = builtin_o3(-0.5, 2.0 / ks, -1.0 / (ks * ks));  // Delta(1) = 1 - 2 + 1 = 0
    EXPECT_NEAR(std::abs(lopatinskii(other, 1.0).delta), 0.0, 1e-12);
    const double ones = 1.0 - other.boundary(1, 0) - other.boundary(2, 0);
    EXPECT_EQ(residue_condition(other), std::abs(ones) < 1e-10);
}

TEST(HypothesisTwo, BuiltinsPass) {
    auto r = check_hypothesis_two(lfr());
    EXPECT_TRUE(r.satisfied);
    EXPECT_EQ(r.verdict, kVerdictUnstable);
    EXPECT_NEAR(std::abs(*r.delta_prime - 2.0), 0.0, 1e-6);
    for (const auto& rs : r.radii) EXPECT_GT(rs.min_abs_delta, 1e-3);
    r = check_hypothesis_two(o3());
    EXPECT_TRUE(r.satisfied);
    EXPECT_EQ(r.verdict, kVerdictStable);
}

TEST(HypothesisTwo, EigenvalueOutsideDiskFailsWithWitness) {
    const double z0 = 2.0;
    const auto ks = spectral_split(lfr(), z0).stable[0];
    const auto s = lfr(1.0 / ks.real());
    const auto r = check_hypothesis_two(s);
    EXPECT_FALSE(r.satisfied);
    bool near = false;
    for (const auto& rs : r.radii)
        if (rs.radius == z0) near = std::abs(rs.witness - z0) < 1e-9 && rs.min_abs_delta < 1e-6;
    EXPECT_TRUE(near);
}

TEST(HypothesisTwo, RequiresHypothesisOne) {
    auto s = lfr();
    s.a[1] -= 0.1;
    EXPECT_THROW(check_hypothesis_two(s), PreconditionError);
}
