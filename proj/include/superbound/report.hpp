#pragma once

#include "config.hpp"
#include "verification.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace superbound {

inline constexpr const char* report_schema = "superbound-report/1";

enum class Status { pass, fail, inconclusive };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        default: return "inconclusive";
    }
}

inline int exit_code(Status s) {
    switch (s) {
        case Status::pass: return 0;
        case Status::fail: return 1;
        default: return 2;
    }
}

/// Nested rows of [re, im] pairs.
inline nlohmann::json matrix_json(const Mat& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(complex_json(a(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline Mat matrix_from_json(const nlohmann::json& j) {
    const auto r = static_cast<Eigen::Index>(j.size());
    const auto c = r ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Mat a(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index k = 0; k < c; ++k) a(i, k) = complex_from_json("matrix", j[i][k]);
    return a;
}

inline nlohmann::json scan_json(const ScanReport& s) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : s.rows)
        rows.push_back({{"generator", r.label},
                        {"residual", r.residual},
                        {"observed", to_string(r.observed)},
                        {"predicted", r.predicted_preserved ? "preserved" : "broken"}});
    return {{"table", rows},
            {"match", s.match()},
            {"max_preserved_residual", s.max_preserved()},
            {"min_broken_residual", s.rows.empty() || s.min_broken() > 1e300 ? nlohmann::json(nullptr)
                                                                             : nlohmann::json(s.min_broken())}};
}

/// Report document under construction. Every key except "wall_time_s" is a
/// function of the configuration.
struct Report {
    nlohmann::json doc;

    Report(const std::string& command, const std::string& subject, const RunConfig& cfg) {
        doc["schema"] = report_schema;
        doc["command"] = command;
        doc["equation"] = subject;
        doc["config"] = config_to_json(cfg);
        doc["samples"] = nlohmann::json::array();
        doc["details"] = nlohmann::json::object();
    }

    void add_sample(nlohmann::json point, double residual) {
        point["residual"] = residual;
        doc["samples"].push_back(std::move(point));
    }

    void finish(Status s, double max_residual, double tol, double wall_time) {
        doc["max_residual"] = max_residual;
        doc["tolerance"] = tol;
        doc["status"] = to_string(s);
        doc["pass"] = s == Status::pass;
        doc["wall_time_s"] = wall_time;
    }

    Status status() const {
        const auto s = doc.at("status").get<std::string>();
        return s == "pass" ? Status::pass : (s == "fail" ? Status::fail : Status::inconclusive);
    }

    std::string dump() const { return doc.dump(2); }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write report '" + path + "'");
        out << dump() << '\n';
    }
};

/// Report text with the timing field removed, for determinism comparisons.
inline std::string canonical_dump(nlohmann::json doc) {
    doc.erase("wall_time_s");
    return doc.dump();
}

}  // namespace superbound
