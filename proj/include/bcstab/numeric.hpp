#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bcstab {

/// Neumaier compensated accumulator.
template <class T = double>
class CompensatedSum {
public:
    void add(T x) {
        const T t = sum_ + x;
        if (mag(sum_) >= mag(x)) comp_ += (sum_ - t) + x;
        else comp_ += (x - t) + sum_;
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    static double mag(double x) { return std::abs(x); }
    static double mag(std::complex<double> x) { return std::abs(x.real()) + std::abs(x.imag()); }
    T sum_{};
    T comp_{};
};

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// Fit y ~ C e^{-c t} by least squares on log y; returns (log C, c).
inline std::pair<double, double> exp_decay_fit(std::span<const double> t, std::span<const double> y) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double m = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double ly = std::log(y[i]);
        st += t[i];
        sy += ly;
        stt += t[i] * t[i];
        sty += t[i] * ly;
    }
    const double slope = (m * sty - st * sy) / (m * stt - st * st);
    return {(sy - slope * st) / m, -slope};
}

}  // namespace bcstab
