#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace bcstab::svg {

struct Series {
    std::string name;
    std::vector<double> x, y;
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

inline const char* color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[i % 10];
}

}  // namespace detail

/// Line chart; log axes drop non-positive samples.
inline std::string line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                              const std::vector<Series>& series, bool logx = false, bool logy = false) {
    const double W = 720, H = 480, L = 80, R = 160, T = 40, B = 60;
    auto tx = [&](double v) { return logx ? std::log10(v) : v; };
    auto ty = [&](double v) { return logy ? std::log10(v) : v; };
    auto ok = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!logx || x > 0) && (!logy || y > 0);
    };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (ok(s.x[i], s.y[i])) {
                x0 = std::min(x0, tx(s.x[i]));
                x1 = std::max(x1, tx(s.x[i]));
                y0 = std::min(y0, ty(s.y[i]));
                y1 = std::max(y1, ty(s.y[i]));
            }
    if (!(x0 < x1)) { x0 -= 1; x1 += 1; }
    if (!(y0 < y1)) { y0 -= 1; y1 += 1; }
    auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4, fy = y0 + (y1 - y0) * k / 4;
        const double sx = L + (W - L - R) * k / 4, sy = H - B - (H - T - B) * k / 4;
        o << "<text x=\"" << sx << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
          << detail::num(logx ? std::pow(10.0, fx) : fx) << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
          << detail::num(logy ? std::pow(10.0, fy) : fy) << "</text>\n";
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    o << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (T + H - B) / 2 << ")\">" << ylabel << "</text>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        o << "<polyline fill=\"none\" stroke=\"" << detail::color(si) << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (ok(s.x[i], s.y[i])) o << detail::num(px(s.x[i])) << ',' << detail::num(py(s.y[i])) << ' ';
        o << "\"/>\n";
        const double ly = T + 16 + 18 * static_cast<double>(si);
        o << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly - 4
          << "\" stroke=\"" << detail::color(si) << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - R + 36 << "\" y=\"" << ly << "\">" << s.name << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

/// Heatmap of values on a (x, y) grid, colored on a diverging blue-white-red scale.
inline std::string heatmap(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                           const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<std::vector<double>>& v) {
    const double W = 720, H = 520, L = 80, R = 40, T = 40, B = 60;
    double vmax = 0.0;
    for (const auto& row : v)
        for (double x : row)
            if (std::isfinite(x)) vmax = std::max(vmax, std::abs(x));
    if (vmax == 0.0) vmax = 1.0;
    const double cw = (W - L - R) / std::max<std::size_t>(1, xs.size());
    const double ch = (H - T - B) / std::max<std::size_t>(1, ys.size());
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << " (|max| = "
      << detail::num(vmax) << ")</text>\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t k = 0; k < ys.size(); ++k) {
            const double t = std::clamp(v[i][k] / vmax, -1.0, 1.0);
            const int a = static_cast<int>(255 * (1 - std::abs(t)));
            char col[16];
            if (t >= 0) std::snprintf(col, sizeof col, "#ff%02x%02x", a, a);
            else std::snprintf(col, sizeof col, "#%02x%02xff", a, a);
            o << "<rect x=\"" << detail::num(L + cw * static_cast<double>(i)) << "\" y=\""
              << detail::num(H - B - ch * static_cast<double>(k + 1)) << "\" width=\"" << detail::num(cw + 0.5)
              << "\" height=\"" << detail::num(ch + 0.5) << "\" fill=\"" << col << "\"/>\n";
        }
    if (!xs.empty() && !ys.empty()) {
        o << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\">" << detail::num(xs.front()) << "</text>\n";
        o << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" text-anchor=\"end\">" << detail::num(xs.back()) << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" text-anchor=\"end\">" << detail::num(ys.front()) << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << T + 10 << "\" text-anchor=\"end\">" << detail::num(ys.back()) << "</text>\n";
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    o << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (T + H - B) / 2 << ")\">" << ylabel << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

inline void write(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

}  // namespace bcstab::svg
