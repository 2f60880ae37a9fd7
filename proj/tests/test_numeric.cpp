#include "common.hpp"

#include <bcstab/banded.hpp>
#include <bcstab/numeric.hpp>
#include <bcstab/parallel.hpp>
#include <bcstab/polynomial.hpp>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <atomic>

using namespace bcstab;

TEST(Banded, SolveMatchesDenseLU) {
    auto g = test::rng(606);
    for (int t = 0; t < 20; ++t) {
        const int n = 20 + t * 7, kl = 1 + t % 3, ku = 1 + t % 4;
        BandedMatrix<cplx> A(n, kl, ku);
        Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
                const cplx v(test::uniform(g, -1, 1), test::uniform(g, -1, 1));
                A.at(i, j) = v;
                D(i, j) = v;
            }
        std::vector<cplx> b(static_cast<std::size_t>(n));
        Eigen::VectorXcd eb(n);
        for (int i = 0; i < n; ++i) eb(i) = b[static_cast<std::size_t>(i)] = cplx(test::uniform(g, -1, 1), 0.3);
        const auto x = BandedLU<cplx>(A).solve(b);
        const Eigen::VectorXcd ex = D.partialPivLu().solve(eb);
        for (int i = 0; i < n; ++i) EXPECT_NEAR(std::abs(x[static_cast<std::size_t>(i)] - ex(i)), 0.0, 1e-9 * (1 + ex.norm()));
        // Backward error relative to |A| |x|.
        const auto y = A.multiply(x);
        double xn = 0.0;
        for (const auto& v : x) xn = std::max(xn, std::abs(v));
        const double an = D.cwiseAbs().rowwise().sum().maxCoeff();
        for (int i = 0; i < n; ++i)
            EXPECT_LT(std::abs(y[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]), 1e-13 * an * xn);
    }
}

TEST(Banded, SingularAndConditionEstimate) {
    BandedMatrix<double> A(4, 1, 1);
    A.at(0, 0) = 1;
    A.at(1, 1) = 1;
    A.at(3, 3) = 1;
    EXPECT_TRUE(BandedLU<double>(A).singular());

    BandedMatrix<double> B(50, 1, 1);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(50, 50);
    for (int i = 0; i < 50; ++i) {
        B.at(i, i) = D(i, i) = 2.0 + 1e-3 * i;
        if (i > 0) B.at(i, i - 1) = D(i, i - 1) = -1.0;
        if (i < 49) B.at(i, i + 1) = D(i, i + 1) = -1.0;
    }
    const double est = BandedLU<double>(B).condition_estimate();
    const Eigen::MatrixXd inv = D.inverse();
    double ninv = 0.0, nA = 0.0;
    for (int i = 0; i < 50; ++i) {
        ninv = std::max(ninv, inv.row(i).cwiseAbs().sum());
        nA = std::max(nA, D.row(i).cwiseAbs().sum());
    }
    EXPECT_LE(est, 1.0001 * nA * ninv);
    EXPECT_GE(est, 0.01 * nA * ninv);
}

TEST(Roots, KnownPolynomials) {
    // (x - 1)(x + 2)(x - 0.5i)
    const cplx i(0, 1);
    const auto r = polynomial_roots({i, cplx(-2.0) - cplx(0.5) * i, cplx(1.0) - cplx(0.5) * i, 1.0});
    ASSERT_EQ(r.size(), 3u);
    for (cplx e : {cplx(1.0), cplx(-2.0), cplx(0, 0.5)}) {
        double best = INFINITY;
        for (cplx k : r) best = std::min(best, std::abs(k - e));
        EXPECT_LT(best, 1e-12);
    }
    EXPECT_THROW(polynomial_roots({0.0, 1.0, 1.0}), DomainError);
    EXPECT_THROW(polynomial_roots({1.0}), DomainError);
}

TEST(Numeric, CompensatedSum) {
    CompensatedSum<double> s;
    s.add(1.0);
    for (int i = 0; i < 1000000; ++i) s.add(1e-16);
    s.add(-1.0);
    EXPECT_NEAR(s.value(), 1e-10, 1e-20);
}

TEST(Numeric, Fits) {
    std::vector<double> x, y, t, e;
    for (int n = 1; n <= 50; ++n) {
        x.push_back(n);
        y.push_back(3.0 * std::pow(n, 0.75));
        t.push_back(n);
        e.push_back(2.0 * std::exp(-0.3 * n));
    }
    EXPECT_NEAR(loglog_slope(x, y), 0.75, 1e-12);
    const auto [logC, c] = exp_decay_fit(t, e);
    EXPECT_NEAR(std::exp(logC), 2.0, 1e-10);
    EXPECT_NEAR(c, 0.3, 1e-12);
}

TEST(Parallel, CoversAllIndicesAndRethrows) {
    std::atomic<int> sum{0};
    parallel_for(100, 4, [&](std::size_t i) { sum += static_cast<int>(i); });
    EXPECT_EQ(sum.load(), 4950);
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw DomainError("x"); }), DomainError);
}
