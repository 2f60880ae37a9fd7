#pragma once

#include <bcstab/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace bcstab {

/// Square banded matrix with kl sub- and ku super-diagonals.
///
/// Band storage follows the LAPACK gbtrf layout: element (i, j) lives in row
/// kl + ku + i - j of column j, leaving kl extra rows for pivoting fill-in.
template <class T>
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku)
        : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), ab_(static_cast<std::size_t>(ld_) * n, T(0)) {}

    int size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    bool in_band(int i, int j) const { return i - j <= kl_ && j - i <= ku_ && i >= 0 && j >= 0 && i < n_ && j < n_; }

    T& at(int i, int j) {
        if (!in_band(i, j)) throw DomainError("BandedMatrix: entry outside the band");
        return ab_[idx(kl_ + ku_ + i - j, j)];
    }
    T get(int i, int j) const { return in_band(i, j) ? ab_[idx(kl_ + ku_ + i - j, j)] : T(0); }

    /// y = A x
    std::vector<T> multiply(const std::vector<T>& x) const {
        std::vector<T> y(static_cast<std::size_t>(n_), T(0));
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
                y[static_cast<std::size_t>(i)] += get(i, j) * x[static_cast<std::size_t>(j)];
        return y;
    }

    double norm_inf() const {
        double best = 0.0;
        for (int i = 0; i < n_; ++i) {
            double row = 0.0;
            for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) row += std::abs(get(i, j));
            best = std::max(best, row);
        }
        return best;
    }

private:
    template <class>
    friend class BandedLU;
    std::size_t idx(int row, int col) const { return static_cast<std::size_t>(col) * ld_ + row; }

    int n_, kl_, ku_, ld_;
    std::vector<T> ab_;
};

/// LU factorization with partial pivoting of a banded matrix.
template <class T>
class BandedLU {
public:
    explicit BandedLU(BandedMatrix<T> a) : a_(std::move(a)), piv_(static_cast<std::size_t>(a_.n_)) {
        const int n = a_.n_, kl = a_.kl_, kv = a_.kl_ + a_.ku_;
        norm_ = a_.norm_inf();
        int ju = 0;
        for (int j = 0; j < n; ++j) {
            const int km = std::min(kl, n - 1 - j);
            int jp = 0;
            double best = -1.0;
            for (int i = 0; i <= km; ++i) {
                const double m = std::abs(a_.ab_[a_.idx(kv + i, j)]);
                if (m > best) {
                    best = m;
                    jp = i;
                }
            }
            piv_[static_cast<std::size_t>(j)] = j + jp;
            const T pivot = a_.ab_[a_.idx(kv + jp, j)];
            if (pivot == T(0)) {
                singular_ = true;
                continue;
            }
            ju = std::max(ju, std::min(j + a_.ku_ + jp, n - 1));
            if (jp != 0)
                for (int c = j; c <= ju; ++c)
                    std::swap(a_.ab_[a_.idx(kv + jp - (c - j), c)], a_.ab_[a_.idx(kv - (c - j), c)]);
            for (int i = 1; i <= km; ++i) a_.ab_[a_.idx(kv + i, j)] /= a_.ab_[a_.idx(kv, j)];
            for (int c = j + 1; c <= ju; ++c) {
                const T u = a_.ab_[a_.idx(kv - (c - j), c)];
                if (u == T(0)) continue;
                for (int i = 1; i <= km; ++i) a_.ab_[a_.idx(kv + i - (c - j), c)] -= a_.ab_[a_.idx(kv + i, j)] * u;
            }
        }
    }

    bool singular() const { return singular_; }

    std::vector<T> solve(std::vector<T> b) const {
        if (singular_) throw ConditioningError("BandedLU: matrix is singular");
        const int n = a_.n_, kl = a_.kl_, kv = a_.kl_ + a_.ku_;
        for (int j = 0; j < n; ++j) {
            const int p = piv_[static_cast<std::size_t>(j)];
            if (p != j) std::swap(b[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(p)]);
            const int km = std::min(kl, n - 1 - j);
            for (int i = 1; i <= km; ++i)
                b[static_cast<std::size_t>(j + i)] -= a_.ab_[a_.idx(kv + i, j)] * b[static_cast<std::size_t>(j)];
        }
        for (int j = n - 1; j >= 0; --j) {
            b[static_cast<std::size_t>(j)] /= a_.ab_[a_.idx(kv, j)];
            const T x = b[static_cast<std::size_t>(j)];
            for (int i = std::max(0, j - kv); i < j; ++i) b[static_cast<std::size_t>(i)] -= a_.ab_[a_.idx(kv + i - j, j)] * x;
        }
        return b;
    }

    /// Lower estimate of the infinity-norm condition number from seeded +-1 probes.
    double condition_estimate(int probes = 2, std::uint64_t seed = 0x9e3779b97f4a7c15ULL) const {
        if (singular_) return INFINITY;
        double best = 0.0;
        std::uint64_t st = seed;
        for (int k = 0; k < probes; ++k) {
            std::vector<T> b(static_cast<std::size_t>(a_.n_));
            for (auto& x : b) {
                st = st * 6364136223846793005ULL + 1442695040888963407ULL;
                x = T((st >> 63) ? 1.0 : -1.0);
            }
            const auto x = solve(b);
            double nx = 0.0;
            for (const auto& v : x) nx = std::max(nx, std::abs(v));
            best = std::max(best, norm_ * nx);
        }
        return best;
    }

private:
    BandedMatrix<T> a_;
    std::vector<int> piv_;
    double norm_ = 0.0;
    bool singular_ = false;
};

}  // namespace bcstab
