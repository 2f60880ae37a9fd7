#pragma once

#include <bcstab/evolution.hpp>
#include <bcstab/hypothesis.hpp>
#include <bcstab/io.hpp>
#include <bcstab/layers.hpp>
#include <bcstab/parallel.hpp>
#include <bcstab/resolvent.hpp>
#include <bcstab/spectral.hpp>
#include <bcstab/svg.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace bcstab::app {

inline const std::vector<std::string>& kinds() {
    static const std::vector<std::string> k = {"check", "simulate", "layers", "err-map", "growth", "oracle"};
    return k;
}

struct Grids {
    std::vector<int> n, j0, j, J;
    std::vector<double> q;
};

struct Tolerances {
    double unit = 1e-8;
    double consistency = 1e-12;
    double coefficient = 1e-8;
    double residue = 1e-10;
    double delta_zero = 1e-6;
    double contour = 1e-9;
};

struct ExperimentConfig {
    std::string kind;
    SchemeDefinition scheme;
    Grids grids;
    Tolerances tol;
    json options = json::object();
    std::string output_dir = "out";
};

enum Exit { kOk = 0, kError = 1, kHypothesis = 2 };

namespace detail {

/// Array of integers, or {"from": a, "to": b, "step": s}.
inline std::vector<int> int_list(const json& j, const std::string& path) {
    std::vector<int> out;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number_integer()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected an integer");
            out.push_back(j[i].get<int>());
        }
    } else if (j.is_object()) {
        for (const char* k : {"from", "to"})
            if (!j.contains(k) || !j.at(k).is_number_integer()) throw ConfigError(path + "." + k, "expected an integer");
        const int a = j.at("from").get<int>(), b = j.at("to").get<int>();
        const int st = j.value("step", 1);
        if (st < 1) throw ConfigError(path + ".step", "must be >= 1");
        for (int x = a; x <= b; x += st) out.push_back(x);
    } else {
        throw ConfigError(path, "expected an array or a range object");
    }
    return out;
}

inline std::vector<double> q_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        double q;
        if (j[i].is_string() && (j[i] == "inf" || j[i] == "infinity")) q = std::numeric_limits<double>::infinity();
        else if (j[i].is_number()) q = j[i].get<double>();
        else throw ConfigError(p, "expected a number or \"inf\"");
        if (!(q >= 1.0)) throw ConfigError(p, "norm exponent must be >= 1");
        out.push_back(q);
    }
    return out;
}

inline void need(const std::vector<int>& v, const std::string& path) {
    if (v.empty()) throw ConfigError(path, "must be nonempty");
}

inline void positive(const std::vector<int>& v, const std::string& path, int lo) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] < lo) throw ConfigError(path + "[" + std::to_string(i) + "]", "must be >= " + std::to_string(lo));
}

inline std::string q_name(double q) { return std::isinf(q) ? "inf" : fmt_double(q); }

inline json q_json(double q) { return std::isinf(q) ? json("inf") : json(q); }

inline json tol_json(const Tolerances& t) {
    return {{"unit_tol", t.unit}, {"consistency", t.consistency}, {"coefficient", t.coefficient},
            {"residue", t.residue}, {"delta_zero", t.delta_zero}, {"contour", t.contour}};
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j, const std::string& subcommand) {
    if (std::find(kinds().begin(), kinds().end(), subcommand) == kinds().end())
        throw ConfigError("kind", "unknown experiment '" + subcommand + "'");
    if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
    ExperimentConfig c;
    c.kind = subcommand;
    if (j.contains("kind")) {
        if (!j.at("kind").is_string() || j.at("kind").get<std::string>() != subcommand)
            throw ConfigError("kind", "does not match the subcommand '" + subcommand + "'");
    }
    if (!j.contains("scheme")) throw ConfigError("scheme", "missing field");
    c.scheme = scheme_from_json(j.at("scheme"), "scheme");

    if (j.contains("grids")) {
        const json& g = j.at("grids");
        if (!g.is_object()) throw ConfigError("grids", "expected an object");
        if (g.contains("n")) c.grids.n = detail::int_list(g.at("n"), "grids.n");
        if (g.contains("j0")) c.grids.j0 = detail::int_list(g.at("j0"), "grids.j0");
        if (g.contains("j")) c.grids.j = detail::int_list(g.at("j"), "grids.j");
        if (g.contains("J")) c.grids.J = detail::int_list(g.at("J"), "grids.J");
        if (g.contains("q")) c.grids.q = detail::q_list(g.at("q"), "grids.q");
    }
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        if (!t.is_object()) throw ConfigError("tolerances", "expected an object");
        std::map<std::string, double*> slots = {{"unit_tol", &c.tol.unit}, {"consistency", &c.tol.consistency},
                                                {"coefficient", &c.tol.coefficient}, {"residue", &c.tol.residue},
                                                {"delta_zero", &c.tol.delta_zero}, {"contour", &c.tol.contour}};
        for (const auto& [k, v] : t.items()) {
            auto it = slots.find(k);
            if (it == slots.end()) throw ConfigError("tolerances." + k, "unknown tolerance");
            if (!v.is_number() || !(v.get<double>() > 0.0)) throw ConfigError("tolerances." + k, "must be a positive number");
            *it->second = v.get<double>();
        }
    }
    if (j.contains("options")) {
        if (!j.at("options").is_object()) throw ConfigError("options", "expected an object");
        c.options = j.at("options");
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) throw ConfigError("output_dir", "expected a string");
        c.output_dir = j.at("output_dir").get<std::string>();
    }

    const auto& g = c.grids;
    if (c.kind == "simulate") {
        detail::need(g.n, "grids.n");
        detail::need(g.j0, "grids.j0");
        detail::positive(g.n, "grids.n", 0);
        detail::positive(g.j0, "grids.j0", 1);
    } else if (c.kind == "layers") {
        detail::need(g.n, "grids.n");
        detail::need(g.j0, "grids.j0");
        detail::positive(g.n, "grids.n", 0);
        detail::positive(g.j0, "grids.j0", 1);
    } else if (c.kind == "err-map") {
        detail::need(g.n, "grids.n");
        detail::need(g.j0, "grids.j0");
        detail::need(g.j, "grids.j");
        detail::positive(g.n, "grids.n", 1);
        detail::positive(g.j0, "grids.j0", 1);
        detail::positive(g.j, "grids.j", 1);
    } else if (c.kind == "growth") {
        detail::need(g.J, "grids.J");
        detail::positive(g.J, "grids.J", 1);
        if (g.q.empty()) throw ConfigError("grids.q", "must be nonempty");
    } else if (c.kind == "oracle") {
        detail::need(g.n, "grids.n");
        detail::need(g.j0, "grids.j0");
        detail::need(g.j, "grids.j");
        detail::positive(g.n, "grids.n", 0);
        detail::positive(g.j0, "grids.j0", 1);
        detail::positive(g.j, "grids.j", 1);
    }
    return c;
}

inline ExperimentConfig load_config(const std::string& path, const std::string& subcommand) {
    std::ifstream f(path);
    if (!f) throw ConfigError("--config", "cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j, subcommand);
}

// ---------------------------------------------------------------------------

struct RunContext {
    const ExperimentConfig& cfg;
    std::filesystem::path out;
    int threads = 1;
    json report;
    std::ostream& log;

    std::string file(const std::string& name) const { return (out / name).string(); }
};

namespace detail {

inline HypothesisOneOptions h1_options(const ExperimentConfig& c) {
    HypothesisOneOptions o;
    o.tol = c.tol.consistency;
    o.coeff_tol = c.tol.coefficient;
    o.order = c.options.value("series_order", 8);
    o.grid_size = c.options.value("grid_size", 100000);
    o.crossover = c.options.value("crossover", 1e-2);
    return o;
}

inline json h1_json(const HypothesisReport& h) {
    json j = {{"satisfied", h.satisfied}, {"alpha", h.alpha}, {"mu", h.mu}, {"beta", complex_to_json(h.beta)},
              {"consistency_residual", h.consistency_residual}, {"dissipativity_margin", h.dissipativity_margin}};
    if (!h.failure.empty()) j["failure"] = h.failure;
    if (h.witness_t) j["witness_t"] = *h.witness_t;
    json ser = json::array();
    for (cplx c : h.series) ser.push_back(complex_to_json(c));
    j["series"] = ser;
    return j;
}

inline json h2_json(const HypothesisTwoReport& r) {
    json j = {{"satisfied", r.satisfied}, {"verdict", r.verdict}, {"delta_at_one", complex_to_json(r.delta_at_one)},
              {"violations", r.violations}};
    if (r.delta_prime) j["delta_prime_at_one"] = complex_to_json(*r.delta_prime);
    if (r.residue) j["residue_condition"] = *r.residue;
    json rad = json::array();
    for (const auto& s : r.radii)
        rad.push_back({{"radius", s.radius}, {"evaluated", s.evaluated}, {"skipped", s.skipped},
                       {"min_abs_delta", s.min_abs_delta}, {"witness", complex_to_json(s.witness)}});
    j["radii"] = rad;
    return j;
}

inline HypothesisTwoOptions h2_options(const ExperimentConfig& c) {
    HypothesisTwoOptions o;
    o.samples = c.options.value("samples", o.samples);
    if (c.options.contains("radii")) o.radii = c.options.at("radii").get<std::vector<double>>();
    o.zero_tol = c.tol.delta_zero;
    o.residue_tol = c.tol.residue;
    return o;
}

/// Hypothesis 1 gate shared by every experiment; false means exit 2.
inline bool gate_h1(RunContext& ctx) {
    const auto h = check_hypothesis_one(ctx.cfg.scheme, h1_options(ctx.cfg));
    ctx.report["hypothesis_one"] = h1_json(h);
    if (!h.satisfied) ctx.log << "Hypothesis 1 fails: " << h.failure << "\n";
    return h.satisfied;
}

inline bool gate_h2(RunContext& ctx) {
    const auto r = check_hypothesis_two(ctx.cfg.scheme, h2_options(ctx.cfg), h1_options(ctx.cfg));
    ctx.report["hypothesis_two"] = h2_json(r);
    ctx.report["verdict"] = r.verdict;
    if (!r.satisfied) ctx.log << "Hypothesis 2 fails\n";
    return r.satisfied;
}

}  // namespace detail

inline int run_check(RunContext& ctx) {
    if (!detail::gate_h1(ctx)) {
        ctx.report["verdict"] = "hypothesis 1 fails";
        return kHypothesis;
    }
    const bool ok = detail::gate_h2(ctx);
    ctx.log << "verdict: " << ctx.report["verdict"].get<std::string>() << "\n";
    return ok ? kOk : kHypothesis;
}

inline int run_simulate(RunContext& ctx) {
    const auto& s = ctx.cfg.scheme;
    if (!detail::gate_h1(ctx)) return kHypothesis;
    std::vector<int> ns = ctx.cfg.grids.n;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    json files = json::array();
    for (int j0 : ctx.cfg.grids.j0) {
        HalfLineField f = HalfLineField::dirac(s, j0);
        WholeLineField w = WholeLineField::dirac();
        std::vector<svg::Series> series;
        int cur = 0;
        for (int n : ns) {
            for (; cur < n; ++cur) {
                f = apply_half_line(s, f);
                w = apply_whole_line(s, w);
            }
            const std::string name = "green_j0_" + std::to_string(j0) + "_n_" + std::to_string(n) + ".csv";
            CsvWriter csv(ctx.file(name), {"j", "value"});
            svg::Series half{"G, n=" + std::to_string(n), {}, {}}, whole{"G~, n=" + std::to_string(n), {}, {}};
            for (int j = f.base_index(); j <= std::max(f.last_index(), 1); ++j) {
                csv.row(j, f(j));
                half.x.push_back(j);
                half.y.push_back(f(j));
            }
            const std::string wname = "whole_j0_" + std::to_string(j0) + "_n_" + std::to_string(n) + ".csv";
            CsvWriter wcsv(ctx.file(wname), {"j", "value"});
            for (int j = w.j_min; j <= w.j_max(); ++j) {
                wcsv.row(j + j0, w(j));
                if (j + j0 >= 1) {
                    whole.x.push_back(j + j0);
                    whole.y.push_back(w(j));
                }
            }
            files.push_back(name);
            files.push_back(wname);
            series.push_back(std::move(half));
            series.push_back(std::move(whole));
        }
        svg::write(ctx.file("green_j0_" + std::to_string(j0) + ".svg"),
                   svg::line_chart("Green functions, j0 = " + std::to_string(j0), "j", "value", series));
    }
    ctx.report["files"] = files;
    return kOk;
}

inline int run_layers(RunContext& ctx) {
    const auto& s = ctx.cfg.scheme;
    if (!detail::gate_h1(ctx) || !detail::gate_h2(ctx)) return kHypothesis;
    const LayerModel m(s, {}, detail::h1_options(ctx.cfg));
    const int J_max = ctx.cfg.options.value("J_max", 30);
    const int ru_j0 = ctx.cfg.options.value("ru_j0_max", 20);
    const int ru_j = ctx.cfg.options.value("ru_j_max", 20);

    const auto rc = rc_analytic(m, J_max);
    const auto ru = ru_analytic(m, ru_j0, ru_j);
    {
        CsvWriter csv(ctx.file("rc_analytic.csv"), {"j", "rc"});
        for (int j = 1; j <= J_max; ++j) csv.row(j, rc.rc[static_cast<std::size_t>(j - 1)].real());
        CsvWriter rcsv(ctx.file("ru.csv"), {"j0", "j", "ru"});
        for (int j0 = 1; j0 <= ru_j0; ++j0)
            for (int j = 1; j <= ru_j; ++j) rcsv.row(j0, j, ru.ru_at(j0, j).real());
    }
    auto fit_json = [](const std::optional<ExpFit>& f) {
        return f ? json{{"C", f->C}, {"c", f->c}} : json{{"identically_zero", true}};
    };
    ctx.report["rc_fit"] = fit_json(rc.rc_fit);
    ctx.report["ru_fit"] = fit_json(ru.ru_fit);
    ctx.report["delta_prime_at_one"] = complex_to_json(m.delta_prime());

    svg::Series an{"|R^c| analytic", {}, {}};
    for (int j = 1; j <= J_max; ++j) {
        an.x.push_back(j);
        an.y.push_back(std::abs(rc.rc[static_cast<std::size_t>(j - 1)]));
    }
    std::vector<svg::Series> series{an};
    json emp = json::array();
    for (int j0 : ctx.cfg.grids.j0)
        for (int n : ctx.cfg.grids.n) {
            const auto e = rc_empirical(m, j0, n, 1, J_max);
            const std::string name = "rc_empirical_j0_" + std::to_string(j0) + "_n_" + std::to_string(n) + ".csv";
            CsvWriter csv(ctx.file(name), {"j", "rc"});
            double sup = 0.0;
            svg::Series es{"|empirical| j0=" + std::to_string(j0) + " n=" + std::to_string(n), {}, {}};
            for (int j = 1; j <= J_max; ++j) {
                const cplx v = e.rc[static_cast<std::size_t>(j - 1)];
                csv.row(j, v.real());
                sup = std::max(sup, std::abs(v - rc.rc[static_cast<std::size_t>(j - 1)]));
                es.x.push_back(j);
                es.y.push_back(std::abs(v));
            }
            series.push_back(std::move(es));
            emp.push_back({{"j0", j0}, {"n", n}, {"sup_error", sup}, {"warnings", e.warnings}, {"file", name}});
        }
    ctx.report["empirical"] = emp;
    svg::write(ctx.file("layers.svg"), svg::line_chart("Boundary layer R^c", "j", "|R^c(j)|", series, false, true));
    return kOk;
}

inline int run_err_map(RunContext& ctx) {
    const auto& s = ctx.cfg.scheme;
    if (!detail::gate_h1(ctx) || !detail::gate_h2(ctx)) return kHypothesis;
    const LayerModel m(s, {}, detail::h1_options(ctx.cfg));
    const auto& g = ctx.cfg.grids;
    const double growth = ctx.cfg.options.value("growth_factor", 1.5);
    std::vector<double> c0 = default_c0_grid();
    if (ctx.cfg.options.contains("c0")) c0 = ctx.cfg.options.at("c0").get<std::vector<double>>();

    json per_j = json::array();
    for (int j : g.j) {
        const auto pts = err_map(m, g.n, g.j0, {j});
        const std::string name = "err_map_j_" + std::to_string(j) + ".csv";
        CsvWriter csv(ctx.file(name), {"n", "j0", "scaled_err"});
        const double e2 = 1.0 / (2.0 * m.mu());
        std::vector<std::vector<double>> grid(g.n.size(), std::vector<double>(g.j0.size()));
        std::size_t k = 0;
        for (std::size_t a = 0; a < g.n.size(); ++a)
            for (std::size_t b = 0; b < g.j0.size(); ++b, ++k) {
                const double v = std::pow(static_cast<double>(pts[k].n), e2) * pts[k].err;
                csv.row(pts[k].n, pts[k].j0, v);
                grid[a][b] = v;
            }
        const auto fit = err_bound_fit(m, pts, c0, growth);
        json cands = json::array();
        for (const auto& cnd : fit.candidates)
            cands.push_back({{"c0", cnd.c0}, {"accepted", cnd.accepted}, {"octave", cnd.octave}, {"octave_sup", cnd.octave_sup}});
        json entry = {{"j", j}, {"file", name}, {"growth_factor", growth}, {"candidates", cands}};
        entry["c0"] = fit.c0 ? json(*fit.c0) : json(nullptr);
        per_j.push_back(entry);
        std::vector<double> xs(g.n.begin(), g.n.end()), ys(g.j0.begin(), g.j0.end());
        svg::write(ctx.file("err_map_j_" + std::to_string(j) + ".svg"),
                   svg::heatmap("n^{1/2mu} Err(n, j0, " + std::to_string(j) + ")", "n", "j0", xs, ys, grid));
        ctx.log << "j = " << j << ": c0 = " << (fit.c0 ? fmt_double(*fit.c0) : std::string("none")) << "\n";
    }
    ctx.report["err_fit"] = per_j;
    return kOk;
}

inline int run_growth(RunContext& ctx) {
    const auto& s = ctx.cfg.scheme;
    if (!detail::gate_h1(ctx)) return kHypothesis;
    const auto& g = ctx.cfg.grids;
    int n_max = ctx.cfg.options.value("n_max", 2000);
    if (!g.n.empty()) n_max = *std::max_element(g.n.begin(), g.n.end());
    if (n_max < 1) throw ConfigError("options.n_max", "must be >= 1");
    std::vector<int> window = {std::min(200, n_max), n_max};
    if (ctx.cfg.options.contains("slope_window")) window = ctx.cfg.options.at("slope_window").get<std::vector<int>>();
    if (window.size() != 2 || window[0] < 1 || window[1] > n_max || window[0] >= window[1])
        throw ConfigError("options.slope_window", "expected [lo, hi] with 1 <= lo < hi <= n_max");
    const int var_from = ctx.cfg.options.value("variation_from", std::min(500, n_max));

    const auto rows = growth_experiment(s, g.q, g.J, n_max, ctx.threads);
    {
        CsvWriter csv(ctx.file("growth.csv"), {"scheme_id", "q", "J", "n", "ratio"});
        for (const auto& r : rows) csv.row(s.id, detail::q_name(r.q), r.J, r.n, r.ratio);
    }
    json summary = json::array();
    for (double q : g.q) {
        const auto mx = max_over_J(rows, q, n_max);
        double lo = INFINITY, hi = 0.0;
        for (int n = var_from; n <= n_max; ++n) {
            lo = std::min(lo, mx[static_cast<std::size_t>(n - 1)]);
            hi = std::max(hi, mx[static_cast<std::size_t>(n - 1)]);
        }
        const double slope = growth_slope(rows, q, window[0], window[1]);
        summary.push_back({{"q", detail::q_json(q)}, {"slope", slope}, {"window", window},
                           {"variation", (hi - lo) / lo}, {"variation_from", var_from},
                           {"max_ratio_at_n_max", mx.back()}});
        ctx.log << "q = " << detail::q_name(q) << ": slope " << slope << ", variation " << (hi - lo) / lo << "\n";

        std::vector<svg::Series> series;
        for (int J : g.J) {
            svg::Series sr{"J=" + std::to_string(J), {}, {}};
            for (const auto& r : rows)
                if (r.q == q && r.J == J) {
                    sr.x.push_back(r.n);
                    sr.y.push_back(r.ratio);
                }
            series.push_back(std::move(sr));
        }
        svg::write(ctx.file("growth_q_" + detail::q_name(q) + ".svg"),
                   svg::line_chart("Norm ratio, q = " + detail::q_name(q), "n", "ratio", series, true, true));
    }
    ctx.report["growth"] = summary;
    return kOk;
}

inline int run_oracle(RunContext& ctx) {
    const auto& s = ctx.cfg.scheme;
    if (!detail::gate_h1(ctx)) return kHypothesis;
    const auto& g = ctx.cfg.grids;
    std::vector<double> r0s = {0.02, 0.05, 0.2};
    if (ctx.cfg.options.contains("r0")) r0s = ctx.cfg.options.at("r0").get<std::vector<double>>();
    const int n_max = *std::max_element(g.n.begin(), g.n.end());
    const int j_max = *std::max_element(g.j.begin(), g.j.end());
    ContourOptions co;
    co.tol = ctx.cfg.tol.contour;

    struct Cell {
        std::vector<ContourTable> tables;  // per r0
        std::vector<std::vector<double>> stepped;  // [n][j-1]
    };
    std::vector<Cell> cells(g.j0.size());
    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(g.j0.size(), ctx.threads, [&](std::size_t c) {
        const int j0 = g.j0[c];
        HalfLineField f = HalfLineField::dirac(s, j0);
        for (int n = 0; n <= n_max; ++n) {
            std::vector<double> row;
            for (int j = 1; j <= j_max; ++j) row.push_back(f(j));
            cells[c].stepped.push_back(std::move(row));
            f = apply_half_line(s, f);
        }
        for (double r0 : r0s) cells[c].tables.push_back(inverse_laplace_table(s, n_max, j0, j_max, r0, co));
    });

    CsvWriter csv(ctx.file("oracle.csv"), {"r0", "n", "j0", "j", "stepped", "contour", "diff"});
    double max_diff = 0.0, max_imag = 0.0, max_spread = 0.0;
    for (std::size_t c = 0; c < g.j0.size(); ++c)
        for (int n : g.n)
            for (int j : g.j) {
                const double st = cells[c].stepped[static_cast<std::size_t>(n)][static_cast<std::size_t>(j - 1)];
                double lo = INFINITY, hi = -INFINITY;
                for (std::size_t k = 0; k < r0s.size(); ++k) {
                    const cplx v = cells[c].tables[k].values[static_cast<std::size_t>(n)][static_cast<std::size_t>(j - 1)];
                    csv.row(r0s[k], n, g.j0[c], j, st, v.real(), v.real() - st);
                    max_diff = std::max(max_diff, std::abs(v.real() - st));
                    max_imag = std::max(max_imag, std::abs(v.imag()));
                    lo = std::min(lo, v.real());
                    hi = std::max(hi, v.real());
                }
                max_spread = std::max(max_spread, hi - lo);
            }

    // Whole-line pair on j - j0 in [1 - max j0, j_max - 1].
    const int j0_max = *std::max_element(g.j0.begin(), g.j0.end());
    double whole_diff = 0.0;
    {
        std::vector<WholeLineField> steps{WholeLineField::dirac()};
        for (int n = 1; n <= n_max; ++n) steps.push_back(apply_whole_line(s, steps.back()));
        for (double r0 : r0s) {
            const auto t = inverse_laplace_whole_table(s, n_max, 1 - j0_max, j_max - 1, r0, co);
            for (int n : g.n)
                for (int d = 1 - j0_max; d <= j_max - 1; ++d)
                    whole_diff = std::max(whole_diff, std::abs(t.values[static_cast<std::size_t>(n)][static_cast<std::size_t>(d - (1 - j0_max))].real() -
                                                               steps[static_cast<std::size_t>(n)](d)));
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ctx.report["oracle"] = {{"r0", r0s}, {"max_abs_diff", max_diff}, {"max_abs_imag", max_imag},
                            {"max_r0_spread", max_spread}, {"whole_line_max_abs_diff", whole_diff},
                            {"seconds", secs}};
    ctx.log << "oracle: max |contour - stepped| = " << max_diff << ", max |imag| = " << max_imag << "\n";
    return kOk;
}

/// Runs one experiment, writes report.json, returns the exit status.
inline int run(const ExperimentConfig& cfg, const std::string& out_dir, int threads, std::ostream& log = std::cout) {
    const auto t0 = std::chrono::steady_clock::now();
    RunContext ctx{cfg, out_dir, threads, json::object(), log};
    std::filesystem::create_directories(ctx.out);
    ctx.report["kind"] = cfg.kind;
    ctx.report["scheme"] = scheme_to_json(cfg.scheme);
    ctx.report["tolerances"] = detail::tol_json(cfg.tol);
    int code = kOk;
    try {
        if (cfg.kind == "check") code = run_check(ctx);
        else if (cfg.kind == "simulate") code = run_simulate(ctx);
        else if (cfg.kind == "layers") code = run_layers(ctx);
        else if (cfg.kind == "err-map") code = run_err_map(ctx);
        else if (cfg.kind == "growth") code = run_growth(ctx);
        else if (cfg.kind == "oracle") code = run_oracle(ctx);
    } catch (const ConfigError& e) {
        ctx.report["error"] = {{"kind", "usage"}, {"message", e.what()}, {"path", e.path}};
        log << "usage error: " << e.what() << "\n";
        code = kError;
    } catch (const PreconditionError& e) {
        ctx.report["error"] = {{"kind", "hypothesis"}, {"message", e.what()}};
        log << "hypothesis failure: " << e.what() << "\n";
        code = kHypothesis;
    } catch (const json::exception& e) {
        ctx.report["error"] = {{"kind", "usage"}, {"message", std::string("options: ") + e.what()}};
        log << "usage error: " << e.what() << "\n";
        code = kError;
    } catch (const Error& e) {
        ctx.report["error"] = {{"kind", "numeric"}, {"message", e.what()}};
        log << "numeric error: " << e.what() << "\n";
        code = kError;
    }
    ctx.report["exit_status"] = code;
    ctx.report["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream(ctx.file("report.json")) << ctx.report.dump(2) << "\n";
    return code;
}

}  // namespace bcstab::app
