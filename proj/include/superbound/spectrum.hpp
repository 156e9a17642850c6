#pragma once

#include "graded_core.hpp"

#include <numeric>
#include <vector>

namespace superbound {

struct Multiplet {
    cplx value;        ///< mean of the clustered eigenvalues
    int multiplicity;
    std::vector<Eigen::Index> members;
};

struct Spectrum {
    std::vector<Multiplet> multiplets;
    double threshold = 0.0;  ///< absolute cluster gap
    bool ambiguous = false;  ///< some pair sits within 10x of the threshold
    double closest_ambiguous = 0.0;

    /// Sorted multiplicities, the lambda-independent fingerprint.
    std::vector<int> pattern() const {
        std::vector<int> p;
        for (const auto& m : multiplets) p.push_back(m.multiplicity);
        std::sort(p.begin(), p.end());
        return p;
    }
};

/// Single-linkage clustering with gap rel_gap * max(1, max|eig|).
inline Spectrum cluster_spectrum(const Vec& eig, double rel_gap = 1e-8) {
    const Eigen::Index n = eig.size();
    Spectrum s;
    s.threshold = rel_gap * std::max(1.0, eig.size() ? eig.cwiseAbs().maxCoeff() : 0.0);
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index i) {
        while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
        return i;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double dist = std::abs(eig(i) - eig(j));
            if (dist < s.threshold) parent[static_cast<std::size_t>(find(i))] = find(j);
            if (dist > s.threshold / 10.0 && dist < 10.0 * s.threshold) {
                s.ambiguous = true;
                s.closest_ambiguous = dist;
            }
        }
    std::vector<Eigen::Index> root_slot(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index r = find(i);
        if (root_slot[static_cast<std::size_t>(r)] < 0) {
            root_slot[static_cast<std::size_t>(r)] = static_cast<Eigen::Index>(s.multiplets.size());
            s.multiplets.push_back({0.0, 0, {}});
        }
        auto& m = s.multiplets[static_cast<std::size_t>(root_slot[static_cast<std::size_t>(r)])];
        m.members.push_back(i);
        ++m.multiplicity;
        m.value += eig(i);
    }
    for (auto& m : s.multiplets) m.value /= double(m.multiplicity);
    std::sort(s.multiplets.begin(), s.multiplets.end(), [](const Multiplet& a, const Multiplet& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return s;
}

/// Orthonormal basis of the generalised eigenspace of t at `value` with the given dimension.
inline Mat generalized_eigenspace(const Mat& t, cplx value, int dim) {
    const Mat shifted = t - value * Mat::Identity(t.rows(), t.cols());
    Mat pw = Mat::Identity(t.rows(), t.cols());
    for (int k = 0; k < dim; ++k) pw = (pw * shifted).eval();
    Eigen::JacobiSVD<Mat> svd(pw, Eigen::ComputeFullV);
    return svd.matrixV().rightCols(dim);
}

/// Spread of the eigenvalues of c restricted to each multiplet of t.
struct MultipletSpread {
    double spread = 0.0;     ///< max over multiplets of max|eig - mean| / scale
    double invariance = 0.0; ///< |c V - V (V^+ c V)| / scale, c must preserve the subspace
};

inline MultipletSpread casimir_spread(const Mat& t, const Spectrum& s, const Mat& c) {
    MultipletSpread out;
    const double scale = std::max(1.0, max_abs(c));
    for (const auto& m : s.multiplets) {
        const Mat v = generalized_eigenspace(t, m.value, m.multiplicity);
        const Mat cr = v.adjoint() * c * v;
        out.invariance = std::max(out.invariance, max_abs(c * v - v * cr) / scale);
        const Vec ev = Eigen::ComplexEigenSolver<Mat>(cr, false).eigenvalues();
        const cplx mean = ev.mean();
        for (Eigen::Index i = 0; i < ev.size(); ++i) out.spread = std::max(out.spread, std::abs(ev(i) - mean) / scale);
    }
    return out;
}

}  // namespace superbound
