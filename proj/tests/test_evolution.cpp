#include "common.hpp"

#include <bcstab/evolution.hpp>

#include <gtest/gtest.h>

using namespace bcstab;
using test::lfr;
using test::o3;

TEST(HalfLine, InteriorDiracOneStep) {
    const auto s = o3();
    const int j0 = 6;
    const auto f = apply_half_line(s, HalfLineField::dirac(s, j0));
    for (int k = -s.p; k <= s.r; ++k) EXPECT_EQ(f(j0 + k), s.coeff(-k));
    EXPECT_EQ(f(0), 0.0);
    EXPECT_EQ(f(j0 - s.p - 1), 0.0);
    EXPECT_EQ(f(j0 + s.r + 1), 0.0);
}

TEST(HalfLine, GhostFeedsFirstCell) {
    const auto s = lfr();
    const auto f = apply_half_line(s, HalfLineField::dirac(s, 1));
    EXPECT_DOUBLE_EQ(f(1), 7.0 / 8);
    EXPECT_DOUBLE_EQ(f(0), 5.0 * f(1));
}

TEST(HalfLine, ZeroFieldStaysZero) {
    const auto s = lfr();
    const auto f = apply_half_line(s, HalfLineField(s.r));
    EXPECT_EQ(hq_norm(f, 1.0), 0.0);
    EXPECT_EQ(f(0), 0.0);
}

TEST(HalfLine, InconsistentGhostsRejected) {
    const auto s = lfr();
    EXPECT_THROW(HalfLineField::from_values(s, {1.0, 1.0}), ContractViolation);
    const auto ok = HalfLineField::from_values(s, {5.0, 1.0});
    EXPECT_EQ(ok(1), 1.0);
    HalfLineField bad(s.r);
    bad.set(1, 1.0);
    EXPECT_THROW(apply_half_line(s, bad), ContractViolation);
}

TEST(WholeLine, OneStepAndTwoSteps) {
    const auto s = o3();
    const auto f = apply_whole_line(s, WholeLineField::dirac());
    for (int k = -s.p; k <= s.r; ++k) EXPECT_EQ(f(k), s.coeff(-k));
    const auto l = lfr();
    const auto g = apply_whole_line(l, apply_whole_line(l, WholeLineField::dirac()));
    EXPECT_DOUBLE_EQ(g(-2), 25.0 / 64);
}

TEST(WholeLine, MassConservation) {
    for (const auto& s : {lfr(), o3()}) {
        WholeLineField f = WholeLineField::dirac();
        for (int n = 1; n <= 1000; ++n) {
            f = apply_whole_line(s, f);
            if (n % 100 == 0) {
                EXPECT_NEAR(mass(f), 1.0, 1e-12) << s.id << " n=" << n;
            }
        }
    }
}

TEST(WholeLine, L1NormBoundedAfterTransient) {
    for (const auto& s : {lfr(), o3()}) {
        WholeLineField f = WholeLineField::dirac();
        double early = 0.0, late = 0.0;
        for (int n = 1; n <= 1000; ++n) {
            f = apply_whole_line(s, f);
            (n <= 500 ? early : late) = std::max(n <= 500 ? early : late, l1_norm(f));
        }
        EXPECT_LE(late, early + 1e-12) << s.id;
        EXPECT_LT(early, 2.0) << s.id;
    }
}

TEST(Green, ZeroStepsIsDirac) {
    const auto g = temporal_green(lfr(), 0, 4);
    EXPECT_EQ(g.field(4), 1.0);
    EXPECT_EQ(hq_norm(g.field, 1.0), 1.0);
    const auto w = temporal_green_whole(lfr(), 0);
    EXPECT_EQ(w.field(0), 1.0);
}

TEST(Green, LfrExactRationalValues) {
    const auto g = temporal_green(lfr(), 3, 1);
    const double expect[] = {2115.0 / 512, 423.0 / 512, 77.0 / 512, 11.0 / 512, 1.0 / 512};
    for (int j = 0; j <= 4; ++j) EXPECT_NEAR(g.field(j), expect[j], 1e-15) << j;
    EXPECT_NEAR(temporal_green(lfr(), 20, 10).field(5), 0.03574303997437144, 1e-15);
    EXPECT_NEAR(temporal_green(lfr(), 20, 10).field(1), 0.60164374973996, 1e-13);
}

TEST(Green, O3HighPrecisionValues) {
    EXPECT_NEAR(temporal_green(o3(), 20, 10).field(5), -0.0089455541377893135151, 1e-14);
    EXPECT_NEAR(temporal_green(o3(), 30, 3).field(1), 0.015384738582115040668, 1e-14);
}

TEST(Green, FarSourceDoesNotSeeBoundary) {
    const auto s = lfr();
    for (int n = 0; n < 50 / s.p; n += 7) {
        const auto g = temporal_green(s, n, 50);
        const auto w = temporal_green_whole(s, n);
        for (int j = 1; j <= 120; ++j) EXPECT_EQ(g.field(j), w.field(j - 50)) << n << " " << j;
    }
}

TEST(Green, FiniteSpeedSupportIsExact) {
    auto g = test::rng(3);
    for (const auto& s : {lfr(), o3()})
        for (int t = 0; t < 20; ++t) {
            const int n = static_cast<int>(test::uniform(g, 0, 40));
            const int j0 = static_cast<int>(test::uniform(g, 1, 30));
            const auto G = temporal_green(s, n, j0);
            for (int j = 1; j <= j0 + n * s.r + 10; ++j) {
                const int d = j - j0;
                if (d < -n * s.p || d > n * s.r) {
                    EXPECT_EQ(G.field(j), 0.0);
                }
            }
            const auto W = temporal_green_whole(s, n);
            EXPECT_GE(W.field.j_min, -n * s.p);
            EXPECT_LE(W.field.j_max(), n * s.r);
        }
}

TEST(Green, RowByTransposeMatchesDirectEvolution) {
    for (const auto& s : {lfr(), o3()}) {
        const int j = 3, n_max = 40, j0_max = 25;
        const auto row = green_row(s, j, j0_max, n_max);
        for (int j0 = 1; j0 <= j0_max; j0 += 4) {
            HalfLineField f = HalfLineField::dirac(s, j0);
            for (int n = 0; n <= n_max; ++n) {
                EXPECT_NEAR(row[n][j0 - 1], f(j), 1e-12 * std::max(1.0, std::abs(f(j)))) << s.id << " " << n << " " << j0;
                f = apply_half_line(s, f);
            }
        }
    }
}

TEST(EvolutionProperty, Linearity) {
    auto g = test::rng(99);
    for (const auto& s : {lfr(), o3()})
        for (int t = 0; t < 10; ++t) {
            std::vector<double> u(15), w(15);
            for (auto& x : u) x = test::uniform(g, -1, 1);
            for (auto& x : w) x = test::uniform(g, -1, 1);
            const double a = test::uniform(g, -2, 2), b = test::uniform(g, -2, 2);
            std::vector<double> c(15);
            for (int i = 0; i < 15; ++i) c[i] = a * u[i] + b * w[i];
            auto U = HalfLineField::from_interior(s, u), W = HalfLineField::from_interior(s, w),
                 C = HalfLineField::from_interior(s, c);
            for (int n = 0; n < 30; ++n) {
                U = apply_half_line(s, U);
                W = apply_half_line(s, W);
                C = apply_half_line(s, C);
            }
            for (int j = 0; j <= 60; ++j) EXPECT_NEAR(C(j), a * U(j) + b * W(j), 1e-9 * (1 + std::abs(C(j))));
        }
}

TEST(EvolutionProperty, Superposition) {
    auto g = test::rng(1234);
    for (const auto& s : {lfr(), o3()})
        for (int t = 0; t < 20; ++t) {
            const int len = 1 + static_cast<int>(test::uniform(g, 0, 20));
            const int n = static_cast<int>(test::uniform(g, 0, 51));
            std::vector<double> u(static_cast<std::size_t>(len));
            for (auto& x : u) x = test::uniform(g, -1, 1);
            auto F = HalfLineField::from_interior(s, u);
            for (int k = 0; k < n; ++k) F = apply_half_line(s, F);
            std::vector<HalfLineField> G;
            for (int j0 = 1; j0 <= len; ++j0) G.push_back(temporal_green(s, n, j0).field);
            double scale = 1.0;
            for (int j = 1; j <= len + n * s.r; ++j) scale = std::max(scale, std::abs(F(j)));
            for (int j = 1; j <= len + n * s.r; ++j) {
                double acc = 0.0;
                for (int j0 = 1; j0 <= len; ++j0) acc += u[j0 - 1] * G[j0 - 1](j);
                EXPECT_NEAR(F(j), acc, 1e-12 * scale) << s.id << " n=" << n << " j=" << j;
            }
        }
}

TEST(Norms, Examples) {
    const auto s = lfr();
    for (double q : {1.0, 2.0, 3.5, double(INFINITY)}) EXPECT_DOUBLE_EQ(hq_norm(HalfLineField::dirac(s, 7), q), 1.0);
    const int J = 37;
    const auto u = HalfLineField::from_interior(s, std::vector<double>(J, 1.0));
    for (double q : {1.0, 2.0, 3.0}) EXPECT_NEAR(hq_norm(u, q), std::pow(J, 1.0 / q), 1e-12);
    EXPECT_EQ(hq_norm(u, INFINITY), 1.0);
    EXPECT_EQ(hq_norm(HalfLineField(s.r), 2.0), 0.0);
    EXPECT_THROW(hq_norm(u, 0.5), DomainError);
}

TEST(Growth, RatiosMatchDirectEvolution) {
    const auto s = lfr();
    const auto rows = growth_experiment(s, {2.0, INFINITY}, {1, 9}, 30, 2);
    ASSERT_EQ(rows.size(), 2u * 2u * 30u);
    auto u = HalfLineField::from_interior(s, std::vector<double>(9, 1.0));
    for (int n = 1; n <= 30; ++n) {
        u = apply_half_line(s, u);
        const double expect = hq_norm(u, 2.0) / 3.0;
        bool seen = false;
        for (const auto& r : rows)
            if (r.J == 9 && r.q == 2.0 && r.n == n) {
                EXPECT_NEAR(r.ratio, expect, 1e-12 * expect);
                seen = true;
            }
        EXPECT_TRUE(seen);
    }
    const auto single = growth_experiment(s, {2.0, INFINITY}, {1, 9}, 30, 1);
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].ratio, single[i].ratio);
}

TEST(Growth, InvalidArguments) {
    EXPECT_THROW(growth_experiment(lfr(), {2.0}, {1}, 0), DomainError);
    EXPECT_THROW(growth_experiment(lfr(), {0.5}, {1}, 5), DomainError);
    EXPECT_THROW(growth_experiment(lfr(), {2.0}, {0}, 5), DomainError);
}

TEST(Growth, LfrL1RatioStaysBounded) {
    const auto rows = growth_experiment(lfr(), {1.0}, {1, 4, 16, 64}, 400);
    const auto mx = max_over_J(rows, 1.0, 400);
    const double top = *std::max_element(mx.begin(), mx.end());
    EXPECT_LT(top, 20.0);
    EXPECT_LT(mx.back(), 1.05 * mx[199]);
}
