#pragma once

#include "boundary_rational.hpp"
#include "qdeformed.hpp"
#include "sampling.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace superbound {

/// Invalid configuration; `field` names the offending entry.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& msg)
        : std::invalid_argument(field + ": " + msg), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class Deformation { rational, trig };

inline std::string to_string(Deformation d) { return d == Deformation::rational ? "rational" : "trig"; }

struct RunConfig {
    int m = 1, n = 1;
    Scheme scheme = Scheme::distinguished;
    Deformation deformation = Deformation::rational;
    cplx mu{0.3, 0.1};
    std::string boundary = "identity";
    int sites = 1;
    std::uint64_t seed = default_seed();
    int samples = 20;
    std::optional<double> tol;  ///< unset: the per-check default
    int order = 4;
    std::optional<cplx> lambda;  ///< spectrum point

    Grading grading() const { return Grading(m, n, scheme); }
    QParams qparams() const { return QParams{mu}; }
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline double to_double(const std::string& field, const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "not a number: '" + s + "'");
    }
}

inline int to_int(const std::string& field, const std::string& s) {
    const double v = to_double(field, s);
    if (v != static_cast<int>(v)) throw ConfigError(field, "not an integer: '" + s + "'");
    return static_cast<int>(v);
}

}  // namespace detail

/// "RE,IM" or "RE".
inline cplx parse_complex(const std::string& field, const std::string& s) {
    const auto p = detail::split(s, ',');
    if (p.size() == 1) return {detail::to_double(field, p[0]), 0.0};
    if (p.size() == 2) return {detail::to_double(field, p[0]), detail::to_double(field, p[1])};
    throw ConfigError(field, "expected RE,IM");
}

inline Scheme parse_scheme(const std::string& s) {
    if (s == "distinguished" || s == "dist") return Scheme::distinguished;
    if (s == "symmetric" || s == "sym") return Scheme::symmetric;
    throw ConfigError("algebra", "unknown grading scheme '" + s + "'");
}

/// "m,n" or "m,n,scheme".
inline void parse_algebra(RunConfig& c, const std::string& s) {
    const auto p = detail::split(s, ',');
    if (p.size() < 2 || p.size() > 3) throw ConfigError("algebra", "expected m,n[,scheme]");
    c.m = detail::to_int("algebra", p[0]);
    c.n = detail::to_int("algebra", p[1]);
    c.scheme = p.size() == 3 ? parse_scheme(p[2]) : Scheme::distinguished;
}

inline std::string format_algebra(const RunConfig& c) {
    return std::to_string(c.m) + "," + std::to_string(c.n) + "," + to_string(c.scheme);
}

// ---- boundary strings ----
//
// rational: identity | kka:m1,m2,n1,n2 | linear:XI[,e1,...,ed]   (E = diag(e), default diag(1,-1,...,-1))
// trig:     identity | kdiag:ALPHA[,XIRE,XIIM] | nondiag:L[,bosonic|fermionic[,MB[,ZETA]]]

struct ParsedBoundary {
    std::string name;
    BoundarySpec rational;
    TrigBoundary trig;
};

inline ParsedBoundary parse_boundary(const RunConfig& c) {
    const Grading g = c.grading();
    ParsedBoundary pb;
    const auto colon = c.boundary.find(':');
    pb.name = c.boundary.substr(0, colon);
    const std::vector<std::string> args =
        colon == std::string::npos ? std::vector<std::string>{} : detail::split(c.boundary.substr(colon + 1), ',');
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError("boundary", msg);
    };
    try {
        if (pb.name == "identity") {
            need(args.empty(), "identity takes no parameters");
        } else if (c.deformation == Deformation::rational && pb.name == "kka") {
            need(args.size() == 4, "expected kka:m1,m2,n1,n2");
            pb.rational = boundary_kka(g, detail::to_int("boundary", args[0]), detail::to_int("boundary", args[1]),
                                       detail::to_int("boundary", args[2]), detail::to_int("boundary", args[3]));
        } else if (c.deformation == Deformation::rational && pb.name == "linear") {
            need(!args.empty() && (args.size() == 1 || static_cast<int>(args.size()) == g.dim() + 1),
                 "expected linear:XI[,e1,...,ed]");
            Mat e = Mat::Identity(g.dim(), g.dim());
            for (int i = 0; i < g.dim(); ++i)
                e(i, i) = args.size() == 1 ? (i == 0 ? 1.0 : -1.0)
                                           : detail::to_double("boundary", args[static_cast<std::size_t>(i + 1)]);
            pb.rational = boundary_linear(g, detail::to_double("boundary", args[0]), e);
        } else if (c.deformation == Deformation::trig && pb.name == "kdiag") {
            need(args.size() == 1 || args.size() == 3, "expected kdiag:ALPHA[,XIRE,XIIM]");
            pb.trig.kind = TrigKind::kdiag;
            pb.trig.alpha = detail::to_int("boundary", args[0]);
            need(pb.trig.alpha >= 0 && pb.trig.alpha <= g.dim(), "alpha out of range");
            if (args.size() == 3)
                pb.trig.xi = {detail::to_double("boundary", args[1]), detail::to_double("boundary", args[2])};
        } else if (c.deformation == Deformation::trig && pb.name == "nondiag") {
            need(!args.empty() && args.size() <= 4, "expected nondiag:L[,sector[,MB[,ZETA]]]");
            pb.trig.kind = TrigKind::nondiag;
            auto& nd = pb.trig.nd;
            nd.diagram = g.scheme();
            nd.L = detail::to_int("boundary", args[0]);
            if (args.size() > 1) {
                need(args[1] == "bosonic" || args[1] == "fermionic", "sector must be bosonic or fermionic");
                nd.sector = args[1] == "bosonic" ? Sector::bosonic : Sector::fermionic;
            }
            if (args.size() > 2) nd.m_b = detail::to_double("boundary", args[2]);
            if (args.size() > 3) nd.zeta = detail::to_double("boundary", args[3]);
            (void)nondiag_pairs(g, nd);
        } else {
            throw ConfigError("boundary", "unknown " + to_string(c.deformation) + " boundary '" + pb.name + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError("boundary", e.what());
    }
    return pb;
}

/// Checks every field against the module preconditions.
inline void validate(const RunConfig& c) {
    try {
        (void)c.grading();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("algebra", e.what());
    }
    if (c.sites < 1 || c.sites > 4) throw ConfigError("sites", "must be in 1..4");
    if (c.samples < 1 || c.samples > 1000) throw ConfigError("samples", "must be in 1..1000");
    if (c.order < 2 || c.order > 8) throw ConfigError("order", "must be in 2..8");
    if (c.tol && !(*c.tol > 0.0)) throw ConfigError("tol", "must be positive");
    if (c.deformation == Deformation::trig)
        for (int j = 1; j <= 8; ++j)
            if (std::abs(std::pow(c.qparams().q(), double(j)) - 1.0) <= 1e-3)
                throw ConfigError("mu", "q is too close to a root of unity of order " + std::to_string(j));
    (void)parse_boundary(c);
}

// ---- serialization ----

inline nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const std::string& field, const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(field, "expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["algebra"] = format_algebra(c);
    j["deformation"] = to_string(c.deformation);
    j["mu"] = complex_json(c.mu);
    j["boundary"] = c.boundary;
    j["sites"] = c.sites;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["tol"] = c.tol ? nlohmann::json(*c.tol) : nlohmann::json(nullptr);
    j["order"] = c.order;
    j["lambda"] = c.lambda ? complex_json(*c.lambda) : nlohmann::json(nullptr);
    return j;
}

/// Fields present in `j` override `base`.
inline RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {}) {
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
    auto get = [&](const char* k) -> const nlohmann::json* { return j.contains(k) ? &j.at(k) : nullptr; };
    try {
        if (auto v = get("algebra")) parse_algebra(base, v->get<std::string>());
        if (auto v = get("deformation")) {
            const auto s = v->get<std::string>();
            if (s != "rational" && s != "trig") throw ConfigError("deformation", "expected rational or trig");
            base.deformation = s == "rational" ? Deformation::rational : Deformation::trig;
        }
        if (auto v = get("mu")) base.mu = complex_from_json("mu", *v);
        if (auto v = get("boundary")) base.boundary = v->get<std::string>();
        if (auto v = get("sites")) base.sites = v->get<int>();
        if (auto v = get("seed")) base.seed = v->get<std::uint64_t>();
        if (auto v = get("samples")) base.samples = v->get<int>();
        if (auto v = get("tol")) base.tol = v->is_null() ? std::nullopt : std::optional<double>(v->get<double>());
        if (auto v = get("order")) base.order = v->get<int>();
        if (auto v = get("lambda"))
            base.lambda = v->is_null() ? std::nullopt : std::optional<cplx>(complex_from_json("lambda", *v));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", e.what());
    }
    for (const auto& [k, v] : j.items()) {
        static const std::vector<std::string> known{"algebra", "deformation", "mu",    "boundary", "sites", "seed",
                                                    "samples", "tol",         "order", "lambda"};
        if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError(k, "unknown config key");
    }
    return base;
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", e.what());
    }
    return config_from_json(j, base);
}

}  // namespace superbound
