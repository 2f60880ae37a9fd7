#pragma once

#include <bcstab/scheme.hpp>
#include <bcstab/spectral.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace bcstab {

using json = nlohmann::json;

/// Invalid configuration; `path` names the offending field.
struct ConfigError : Error {
    ConfigError(std::string path, const std::string& what)
        : Error(path + ": " + what), path(std::move(path)) {}
    std::string path;
};

/// Number, or a string holding a decimal or a rational "p/q".
inline double parse_coefficient(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) throw ConfigError(path, "expected a number or a numeric string");
    const std::string s = j.get<std::string>();
    static const std::regex rat(R"(\s*([-+]?\d+)\s*/\s*([-+]?\d+)\s*)");
    static const std::regex dec(R"(\s*[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?\s*)");
    std::smatch m;
    if (std::regex_match(s, m, rat)) {
        const double den = std::stod(m[2]);
        if (den == 0.0) throw ConfigError(path, "zero denominator");
        return std::stod(m[1]) / den;
    }
    if (std::regex_match(s, dec)) return std::stod(s);
    throw ConfigError(path, "cannot parse coefficient '" + s + "'");
}

namespace detail {

inline const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(path + "." + key, "missing field");
    return j.at(key);
}

inline int require_int(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
    return v.get<int>();
}

}  // namespace detail

/// Inline definition or {"builtin": "lfr" | "o3", ...named parameters}.
inline SchemeDefinition scheme_from_json(const json& j, const std::string& path = "scheme") {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    try {
        if (j.contains("builtin")) {
            const json& name = j.at("builtin");
            if (!name.is_string()) throw ConfigError(path + ".builtin", "expected a string");
            const std::string b = name.get<std::string>();
            auto num = [&](const char* key) { return parse_coefficient(detail::require(j, key, path), path + "." + key); };
            if (b == "lfr") return builtin_lfr(num("alpha"), num("D"), num("b"));
            if (b == "o3") {
                const bool has1 = j.contains("b1"), has2 = j.contains("b2");
                if (has1 != has2) throw ConfigError(path, "o3 needs both b1 and b2, or neither");
                return has1 ? builtin_o3(num("alpha"), num("b1"), num("b2")) : builtin_o3_stable(num("alpha"));
            }
            throw ConfigError(path + ".builtin", "unknown builtin '" + b + "'");
        }
        SchemeDefinition s;
        s.r = detail::require_int(j, "r", path);
        s.p = detail::require_int(j, "p", path);
        s.p_b = detail::require_int(j, "p_b", path);
        const json& a = detail::require(j, "a", path);
        if (!a.is_array()) throw ConfigError(path + ".a", "expected an array");
        for (std::size_t i = 0; i < a.size(); ++i) s.a.push_back(parse_coefficient(a[i], path + ".a[" + std::to_string(i) + "]"));
        const json& b = detail::require(j, "b", path);
        if (!b.is_array()) throw ConfigError(path + ".b", "expected an array of rows");
        for (std::size_t g = 0; g < b.size(); ++g) {
            const std::string rp = path + ".b[" + std::to_string(g) + "]";
            if (!b[g].is_array()) throw ConfigError(rp, "expected an array");
            std::vector<double> row;
            for (std::size_t k = 0; k < b[g].size(); ++k) row.push_back(parse_coefficient(b[g][k], rp + "[" + std::to_string(k) + "]"));
            s.b.push_back(std::move(row));
        }
        if (j.contains("lambda")) s.lambda = parse_coefficient(j.at("lambda"), path + ".lambda");
        if (j.contains("v")) s.v = parse_coefficient(j.at("v"), path + ".v");
        else {
            double drift = 0.0;
            for (int k = -s.r; k <= s.p && s.a.size() == static_cast<std::size_t>(s.p + s.r + 1); ++k) drift += k * s.coeff(k);
            s.v = drift > 0.0 ? -drift / s.lambda : -1.0;
        }
        if (j.contains("id") && j.at("id").is_string()) s.id = j.at("id").get<std::string>();
        s.validate();
        return s;
    } catch (const ConstructionError& e) {
        throw ConfigError(path, e.what());
    }
}

inline json scheme_to_json(const SchemeDefinition& s) {
    json j;
    j["id"] = s.id;
    j["r"] = s.r;
    j["p"] = s.p;
    j["a"] = s.a;
    j["p_b"] = s.p_b;
    j["b"] = s.b;
    j["lambda"] = s.lambda;
    j["v"] = s.v;
    return j;
}

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

/// Round-trip representation of a double.
inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Minimal CSV writer; values are written with full precision.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw Error("cannot open " + path);
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << '\n';
    }
    template <class... Ts>
    void row(const Ts&... xs) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(xs), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double x) { return fmt_double(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(long x) { return std::to_string(x); }
    static std::string cell(const std::string& x) { return x; }
    static std::string cell(const char* x) { return x; }
    std::ofstream out_;
};

}  // namespace bcstab
