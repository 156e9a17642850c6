#pragma once

#include "graded_core.hpp"

#include <limits>
#include <string>
#include <vector>

namespace superbound {

enum class SymClass { preserved, broken, inconclusive };

inline std::string to_string(SymClass c) {
    switch (c) {
        case SymClass::preserved: return "preserved";
        case SymClass::broken: return "broken";
        default: return "inconclusive";
    }
}

struct Tolerances {
    double preserved = 1e-9;
    double broken = 1e-4;
};

inline SymClass classify(double residual, const Tolerances& tol) {
    if (residual < tol.preserved) return SymClass::preserved;
    if (residual > tol.broken) return SymClass::broken;
    return SymClass::inconclusive;
}

struct GeneratorScan {
    std::string label;
    double residual = 0.0;
    SymClass observed = SymClass::inconclusive;
    bool predicted_preserved = false;
};

/// Preserved/broken table. `match` compares the observed preserved set with the prediction.
struct ScanReport {
    std::vector<GeneratorScan> rows;

    bool match() const {
        for (const auto& r : rows)
            if ((r.observed == SymClass::preserved) != r.predicted_preserved || r.observed == SymClass::inconclusive)
                return false;
        return true;
    }
    bool inconclusive() const {
        for (const auto& r : rows)
            if (r.observed == SymClass::inconclusive) return true;
        return false;
    }
    double max_preserved() const {
        double m = 0.0;
        for (const auto& r : rows)
            if (r.predicted_preserved) m = std::max(m, r.residual);
        return m;
    }
    double min_broken() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& r : rows)
            if (!r.predicted_preserved) m = std::min(m, r.residual);
        return m;
    }
};

/// Residual of A_12 X_1 B X_2 = Y_2 C Y_1 D on (aux1, aux2, quantum...).
/// X, Y act on (aux, quantum 1..N); A..D act on the two auxiliary spaces.
inline double exchange_residual(const Grading& g, const Mat& a, const Mat& x1, const Mat& b, const Mat& x2,
                                const Mat& y2, const Mat& c, const Mat& y1, const Mat& d) {
    const int s = num_spaces(g, x1);
    const int total = s + 1;
    std::vector<int> first{0}, second{1};
    for (int k = 1; k < s; ++k) {
        first.push_back(k + 1);
        second.push_back(k + 1);
    }
    auto aux = [&](const Mat& m) { return place(g, m, {0, 1}, total); };
    const Mat lhs = aux(a) * place(g, x1, first, total) * aux(b) * place(g, x2, second, total);
    const Mat rhs = place(g, y2, second, total) * aux(c) * place(g, y1, first, total) * aux(d);
    return rel_diff(lhs, rhs);
}

}  // namespace superbound
