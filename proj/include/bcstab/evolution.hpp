#pragma once

#include <bcstab/numeric.hpp>
#include <bcstab/scheme.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace bcstab {

/// Sequence (w_j)_{j >= 1-r} with finite explicit support; ghosts tied to the interior.
class HalfLineField {
public:
    HalfLineField() = default;
    explicit HalfLineField(int r) : r_(r), v_(static_cast<std::size_t>(r), 0.0) {}

    int base_index() const { return 1 - r_; }
    /// Largest explicitly stored index.
    int last_index() const { return static_cast<int>(v_.size()) - r_; }
    double operator()(int j) const {
        if (j < 1 - r_ || j > last_index()) return 0.0;
        return v_[static_cast<std::size_t>(j + r_ - 1)];
    }
    const std::vector<double>& raw() const { return v_; }
    std::vector<double>& raw() { return v_; }

    void set(int j, double x) {
        if (j > last_index()) v_.resize(static_cast<std::size_t>(j + r_), 0.0);
        v_[static_cast<std::size_t>(j + r_ - 1)] = x;
    }
    /// Recomputes ghosts from the interior values.
    void fill_ghosts(const SchemeDefinition& s) {
        for (int j = 1 - r_; j <= 0; ++j) {
            double g = 0.0;
            for (int k = 1; k <= s.p_b; ++k) g += s.boundary(k, j) * (*this)(k);
            v_[static_cast<std::size_t>(j + r_ - 1)] = g;
        }
    }
    /// Max ghost mismatch relative to the field scale.
    double ghost_defect(const SchemeDefinition& s) const {
        double scale = 1.0, worst = 0.0;
        for (double x : v_) scale = std::max(scale, std::abs(x));
        for (int j = 1 - r_; j <= 0; ++j) {
            double g = 0.0;
            for (int k = 1; k <= s.p_b; ++k) g += s.boundary(k, j) * (*this)(k);
            worst = std::max(worst, std::abs(g - (*this)(j)));
        }
        return worst / scale;
    }
    void trim() {
        while (v_.size() > static_cast<std::size_t>(r_) && v_.back() == 0.0) v_.pop_back();
    }

    static HalfLineField dirac(const SchemeDefinition& s, int j0) {
        if (j0 < 1) throw DomainError("dirac: source index must be >= 1");
        HalfLineField f(s.r);
        f.set(j0, 1.0);
        f.fill_ghosts(s);
        return f;
    }
    /// Interior values w_1, w_2, ...; ghosts derived.
    static HalfLineField from_interior(const SchemeDefinition& s, const std::vector<double>& interior) {
        HalfLineField f(s.r);
        for (std::size_t i = 0; i < interior.size(); ++i) f.set(static_cast<int>(i) + 1, interior[i]);
        f.fill_ghosts(s);
        f.trim();
        return f;
    }
    /// External values starting at index 1-r; ghosts are verified, not trusted.
    static HalfLineField from_values(const SchemeDefinition& s, const std::vector<double>& values,
                                     double tol = 1e-10) {
        HalfLineField f(s.r);
        for (std::size_t i = 0; i < values.size(); ++i) f.set(static_cast<int>(i) + 1 - s.r, values[i]);
        if (f.ghost_defect(s) > tol) throw ContractViolation("ghost values inconsistent with the boundary condition");
        f.fill_ghosts(s);
        return f;
    }

private:
    int r_ = 1;
    std::vector<double> v_;
};

/// Finite window [j_min, j_min + size - 1] of a sequence on Z.
struct WholeLineField {
    int j_min = 0;
    std::vector<double> values;

    int j_max() const { return j_min + static_cast<int>(values.size()) - 1; }
    double operator()(int j) const {
        if (j < j_min || j > j_max()) return 0.0;
        return values[static_cast<std::size_t>(j - j_min)];
    }
    static WholeLineField dirac(int j = 0) { return {j, {1.0}}; }
};

inline HalfLineField apply_half_line(const SchemeDefinition& s, const HalfLineField& f,
                                     double tol = 1e-10) {
    if (f.ghost_defect(s) > tol) throw ContractViolation("apply_half_line: ghost inconsistency");
    const int last = f.last_index();
    HalfLineField out(s.r);
    if (last >= 1) {
        auto& w = out.raw();
        w.assign(static_cast<std::size_t>(last + 2 * s.r), 0.0);
        for (int j = 1; j <= last + s.r; ++j) {
            double acc = 0.0;
            for (int k = -s.r; k <= s.p; ++k) acc += s.coeff(k) * f(j + k);
            w[static_cast<std::size_t>(j + s.r - 1)] = acc;
        }
    }
    out.fill_ghosts(s);
    out.trim();
    return out;
}

inline WholeLineField apply_whole_line(const SchemeDefinition& s, const WholeLineField& f) {
    WholeLineField out;
    out.j_min = f.j_min - s.p;
    const int hi = f.j_max() + s.r;
    out.values.assign(static_cast<std::size_t>(hi - out.j_min + 1), 0.0);
    for (int m = f.j_min; m <= f.j_max(); ++m) {
        const double x = f(m);
        if (x == 0.0) continue;
        for (int k = -s.r; k <= s.p; ++k) out.values[static_cast<std::size_t>(m - k - out.j_min)] += s.coeff(k) * x;
    }
    return out;
}

struct HalfLineGreen {
    int n = 0;
    int j0 = 1;
    HalfLineField field;
};

struct WholeLineGreen {
    int n = 0;
    WholeLineField field;
};

inline HalfLineGreen temporal_green(const SchemeDefinition& s, int n, int j0) {
    if (n < 0) throw DomainError("temporal_green: n must be >= 0");
    HalfLineGreen g{n, j0, HalfLineField::dirac(s, j0)};
    for (int k = 0; k < n; ++k) g.field = apply_half_line(s, g.field);
    return g;
}

inline WholeLineGreen temporal_green_whole(const SchemeDefinition& s, int n) {
    if (n < 0) throw DomainError("temporal_green_whole: n must be >= 0");
    WholeLineGreen g{n, WholeLineField::dirac()};
    for (int k = 0; k < n; ++k) g.field = apply_whole_line(s, g.field);
    return g;
}

/// G(n, j0, j) for j0 = 1..j0_max and every n = 0..n_max, at a fixed j.
///
/// Iterates the transpose of the half-line operator from e_j; row n of the
/// result holds G(n, j0, j) at position j0 - 1.
inline std::vector<std::vector<double>> green_row(const SchemeDefinition& s, int j, int j0_max, int n_max) {
    if (j < 1 || j0_max < 1 || n_max < 0) throw DomainError("green_row: invalid indices");
    const int M = std::max(j0_max, j) + s.r * n_max + s.p + 1;
    std::vector<double> v(static_cast<std::size_t>(M + 1), 0.0), w(v.size());
    v[static_cast<std::size_t>(j)] = 1.0;
    // Boundary feed: coefficient of w_m (m <= p_b) from row i of the operator.
    std::vector<std::vector<double>> feed(static_cast<std::size_t>(s.r + 1),
                                          std::vector<double>(static_cast<std::size_t>(s.p_b + 1), 0.0));
    for (int i = 1; i <= s.r; ++i)
        for (int m = 1; m <= s.p_b; ++m)
            for (int k = -s.r; k <= -i; ++k)
                feed[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] += s.coeff(k) * s.boundary(m, i + k);

    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(n_max + 1));
    auto record = [&] { out.emplace_back(v.begin() + 1, v.begin() + 1 + j0_max); };
    record();
    for (int n = 1; n <= n_max; ++n) {
        for (int m = 1; m <= M; ++m) {
            double acc = 0.0;
            for (int k = -s.r; k <= s.p; ++k) {
                const int i = m - k;
                if (i >= 1 && i <= M) acc += s.coeff(k) * v[static_cast<std::size_t>(i)];
            }
            if (m <= s.p_b)
                for (int i = 1; i <= s.r; ++i)
                    acc += feed[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] * v[static_cast<std::size_t>(i)];
            w[static_cast<std::size_t>(m)] = acc;
        }
        std::swap(v, w);
        record();
    }
    return out;
}

// ---------------------------------------------------------------------------

inline double lq_norm(const double* x, std::size_t m, double q) {
    if (!(q >= 1.0)) throw DomainError("norm exponent must be >= 1");
    if (std::isinf(q)) {
        double mx = 0.0;
        for (std::size_t i = 0; i < m; ++i) mx = std::max(mx, std::abs(x[i]));
        return mx;
    }
    CompensatedSum<double> acc;
    if (q == 1.0) for (std::size_t i = 0; i < m; ++i) acc.add(std::abs(x[i]));
    else if (q == 2.0) for (std::size_t i = 0; i < m; ++i) acc.add(x[i] * x[i]);
    else for (std::size_t i = 0; i < m; ++i) acc.add(std::pow(std::abs(x[i]), q));
    return std::pow(acc.value(), 1.0 / q);
}

/// l^q norm over j >= 1 (ghosts excluded).
inline double hq_norm(const HalfLineField& f, double q) {
    const auto& v = f.raw();
    const int r = 1 - f.base_index();
    if (v.size() <= static_cast<std::size_t>(r)) {
        if (!(q >= 1.0)) throw DomainError("norm exponent must be >= 1");
        return 0.0;
    }
    return lq_norm(v.data() + r, v.size() - static_cast<std::size_t>(r), q);
}

inline double l1_norm(const WholeLineField& f) { return lq_norm(f.values.data(), f.values.size(), 1.0); }

inline double mass(const WholeLineField& f) {
    CompensatedSum<double> acc;
    for (double x : f.values) acc.add(x);
    return acc.value();
}

struct GrowthRow {
    double q;
    int J;
    int n;
    double ratio;
};

/// Lower bounds ||T^n u_J|| / ||u_J|| for u_J = sum_{j0 <= J} delta_{j0}.
/// Rows ordered by (J in input order, q in input order, n).
inline std::vector<GrowthRow> growth_experiment(const SchemeDefinition& s, const std::vector<double>& qs,
                                                const std::vector<int>& J_list, int n_max, int threads = 1) {
    if (n_max < 1) throw DomainError("growth_experiment: n_max must be >= 1");
    for (double q : qs)
        if (!(q >= 1.0)) throw DomainError("growth_experiment: q must be >= 1");
    for (int J : J_list)
        if (J < 1) throw DomainError("growth_experiment: J must be >= 1");

    std::vector<std::vector<GrowthRow>> cells(J_list.size());
    auto run_cell = [&](std::size_t c) {
        const int J = J_list[c];
        std::vector<double> u(static_cast<std::size_t>(J), 1.0);
        HalfLineField f = HalfLineField::from_interior(s, u);
        std::vector<double> norm0;
        for (double q : qs) norm0.push_back(hq_norm(f, q));
        // Double-buffered stepping on a preallocated window.
        const int last = J + s.r * n_max + 1;
        std::vector<double> a(static_cast<std::size_t>(last + s.r + s.p + 1), 0.0), b(a.size(), 0.0);
        auto at = [&](int j) { return static_cast<std::size_t>(j + s.r - 1); };
        for (int j = 1 - s.r; j <= J; ++j) a[at(j)] = f(j);
        std::vector<GrowthRow> rows;
        rows.reserve(qs.size() * static_cast<std::size_t>(n_max));
        int hi = J;
        for (int n = 1; n <= n_max; ++n) {
            hi += s.r;
            for (int j = 1; j <= hi; ++j) {
                double acc = 0.0;
                const std::size_t base = at(j);
                for (int k = -s.r; k <= s.p; ++k) acc += s.coeff(k) * a[base + static_cast<std::size_t>(k)];
                b[base] = acc;
            }
            for (int j = 1 - s.r; j <= 0; ++j) {
                double g = 0.0;
                for (int k = 1; k <= s.p_b; ++k) g += s.boundary(k, j) * b[at(k)];
                b[at(j)] = g;
            }
            std::swap(a, b);
            for (std::size_t iq = 0; iq < qs.size(); ++iq)
                rows.push_back({qs[iq], J, n, lq_norm(a.data() + at(1), static_cast<std::size_t>(hi), qs[iq]) / norm0[iq]});
        }
        // Reorder: q-major within the cell.
        std::stable_sort(rows.begin(), rows.end(), [&](const GrowthRow& x, const GrowthRow& y) {
            const auto ix = std::find(qs.begin(), qs.end(), x.q) - qs.begin();
            const auto iy = std::find(qs.begin(), qs.end(), y.q) - qs.begin();
            return ix < iy;
        });
        cells[c] = std::move(rows);
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        for (std::size_t c = 0; c < J_list.size(); ++c) run_cell(c);
    } else {
        std::mutex mu;
        std::size_t next = 0;
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t c;
                    {
                        std::lock_guard<std::mutex> lk(mu);
                        if (next >= J_list.size()) return;
                        c = next++;
                    }
                    run_cell(c);
                }
            });
        for (auto& th : pool) th.join();
    }
    std::vector<GrowthRow> out;
    for (auto& c : cells) out.insert(out.end(), c.begin(), c.end());
    return out;
}

/// max over J of the growth ratio, indexed by n - 1.
inline std::vector<double> max_over_J(const std::vector<GrowthRow>& rows, double q, int n_max) {
    std::vector<double> m(static_cast<std::size_t>(n_max), 0.0);
    for (const auto& row : rows)
        if (row.q == q && row.n >= 1 && row.n <= n_max)
            m[static_cast<std::size_t>(row.n - 1)] = std::max(m[static_cast<std::size_t>(row.n - 1)], row.ratio);
    return m;
}

/// Log-log slope of the max-over-J ratio on n in [lo, hi].
inline double growth_slope(const std::vector<GrowthRow>& rows, double q, int lo, int hi) {
    const auto m = max_over_J(rows, q, hi);
    std::vector<double> x, y;
    for (int n = lo; n <= hi; ++n) {
        x.push_back(n);
        y.push_back(m[static_cast<std::size_t>(n - 1)]);
    }
    return loglog_slope(x, y);
}

}  // namespace bcstab
