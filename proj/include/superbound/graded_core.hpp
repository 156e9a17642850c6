#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace superbound {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cplx I_c{0.0, 1.0};

enum class Scheme { distinguished, symmetric };

inline std::string to_string(Scheme s) {
    return s == Scheme::distinguished ? "distinguished" : "symmetric";
}

/// Z2 parity assignment of the basis of C^{m|n}.
class Grading {
public:
    Grading(int m, int n, Scheme scheme) : m_(m), n_(n), scheme_(scheme) {
        if (m < 0 || n < 0 || m + n < 1)
            throw std::invalid_argument("grading requires m, n >= 0 and m + n >= 1");
        if (scheme == Scheme::symmetric) {
            if (n % 2 != 0) throw std::invalid_argument("symmetric grading requires n = 2k");
            // (0^k, 1^m, 0^k)
            const int k = n / 2;
            for (int i = 0; i < k; ++i) par_.push_back(0);
            for (int i = 0; i < m; ++i) par_.push_back(1);
            for (int i = 0; i < k; ++i) par_.push_back(0);
        } else {
            for (int i = 0; i < m; ++i) par_.push_back(0);
            for (int i = 0; i < n; ++i) par_.push_back(1);
        }
    }

    int m() const { return m_; }
    int n() const { return n_; }
    int k() const { return n_ / 2; }
    Scheme scheme() const { return scheme_; }
    int dim() const { return m_ + n_; }
    int parity(int i) const { return par_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& parities() const { return par_; }
    /// (-1)^{[i]}
    double sgn(int i) const { return par_[static_cast<std::size_t>(i)] ? -1.0 : 1.0; }
    double rho() const { return 0.5 * (n_ - m_); }

    bool operator==(const Grading& o) const { return par_ == o.par_ && m_ == o.m_ && n_ == o.n_; }

private:
    int m_, n_;
    Scheme scheme_;
    std::vector<int> par_;
};

inline Grading make_grading(int m, int n, Scheme scheme) { return Grading(m, n, scheme); }

namespace detail {

inline Eigen::Index ipow(int d, int s) {
    Eigen::Index r = 1;
    for (int i = 0; i < s; ++i) r *= d;
    return r;
}

inline int digit(Eigen::Index flat, int d, int s, int pos) {
    return static_cast<int>((flat / ipow(d, s - 1 - pos)) % d);
}

}  // namespace detail

/// Number of tensor factors of an operator, inferred from its size.
inline int num_spaces(const Grading& g, const Mat& a) {
    const int d = g.dim();
    Eigen::Index n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("operator must be square");
    int s = 0;
    while (n > 1) {
        if (n % d != 0) throw std::invalid_argument("operator size is not a power of the dimension");
        n /= d;
        ++s;
    }
    if (d == 1) s = 1;
    return s;
}

/// Total parity of a flattened multi-index (row-major, space 0 most significant).
inline int index_parity(const Grading& g, int spaces, Eigen::Index flat) {
    const int d = g.dim();
    int p = 0;
    for (int q = spaces - 1; q >= 0; --q) {
        p += g.parity(static_cast<int>(flat % d));
        flat /= d;
    }
    return p & 1;
}

inline std::vector<int> parity_table(const Grading& g, int spaces) {
    const Eigen::Index n = detail::ipow(g.dim(), spaces);
    std::vector<int> t(static_cast<std::size_t>(n));
    for (Eigen::Index r = 0; r < n; ++r) t[static_cast<std::size_t>(r)] = index_parity(g, spaces, r);
    return t;
}

inline Mat identity(const Grading& g, int spaces) {
    const Eigen::Index n = detail::ipow(g.dim(), spaces);
    return Mat::Identity(n, n);
}

/// Matrix unit e_ij on one space (0-based).
inline Mat unit(const Grading& g, int i, int j) {
    Mat e = Mat::Zero(g.dim(), g.dim());
    e(i, j) = 1.0;
    return e;
}

/// Graded tensor product A (x) B realised as an ordinary matrix:
/// entry((rA,rB),(cA,cB)) = A(rA,cA) B(rB,cB) (-1)^{[rB]([rA]+[cA])}.
inline Mat tensor_embed(const Grading& g, const Mat& a, const Mat& b) {
    const int sa = num_spaces(g, a);
    const int sb = num_spaces(g, b);
    const auto pa = parity_table(g, sa);
    const auto pb = parity_table(g, sb);
    Mat bflip = b;
    for (Eigen::Index r = 0; r < b.rows(); ++r)
        if (pb[static_cast<std::size_t>(r)]) bflip.row(r) *= -1.0;
    const Eigen::Index nb = b.rows();
    Mat out = Mat::Zero(a.rows() * nb, a.cols() * nb);
    for (Eigen::Index ra = 0; ra < a.rows(); ++ra)
        for (Eigen::Index ca = 0; ca < a.cols(); ++ca) {
            const cplx v = a(ra, ca);
            if (v == cplx(0.0)) continue;
            const bool odd = (pa[static_cast<std::size_t>(ra)] + pa[static_cast<std::size_t>(ca)]) & 1;
            out.block(ra * nb, ca * nb, nb, nb) = v * (odd ? bflip : b);
        }
    return out;
}

/// Signed permutation that relabels tensor factors. `dest[p]` is the new
/// position of factor p. Conjugating by it realises the graded flip.
struct SpacePermutation {
    std::vector<Eigen::Index> target;
    std::vector<double> sign;
};

inline SpacePermutation space_permutation(const Grading& g, int spaces, const std::vector<int>& dest) {
    const int d = g.dim();
    const Eigen::Index n = detail::ipow(d, spaces);
    SpacePermutation sp;
    sp.target.resize(static_cast<std::size_t>(n));
    sp.sign.resize(static_cast<std::size_t>(n));
    std::vector<int> dig(static_cast<std::size_t>(spaces)), out(static_cast<std::size_t>(spaces));
    for (Eigen::Index r = 0; r < n; ++r) {
        for (int p = 0; p < spaces; ++p) dig[static_cast<std::size_t>(p)] = detail::digit(r, d, spaces, p);
        int s = 0;
        for (int p = 0; p < spaces; ++p)
            for (int q = p + 1; q < spaces; ++q)
                if (dest[static_cast<std::size_t>(p)] > dest[static_cast<std::size_t>(q)])
                    s += g.parity(dig[static_cast<std::size_t>(p)]) * g.parity(dig[static_cast<std::size_t>(q)]);
        for (int p = 0; p < spaces; ++p) out[static_cast<std::size_t>(dest[static_cast<std::size_t>(p)])] = dig[static_cast<std::size_t>(p)];
        Eigen::Index t = 0;
        for (int p = 0; p < spaces; ++p) t = t * d + out[static_cast<std::size_t>(p)];
        sp.target[static_cast<std::size_t>(r)] = t;
        sp.sign[static_cast<std::size_t>(r)] = (s & 1) ? -1.0 : 1.0;
    }
    return sp;
}

inline Mat permute_spaces(const Mat& a, const SpacePermutation& sp) {
    Mat out(a.rows(), a.cols());
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        const auto tc = sp.target[static_cast<std::size_t>(c)];
        const double sc = sp.sign[static_cast<std::size_t>(c)];
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            out(sp.target[static_cast<std::size_t>(r)], tc) = sp.sign[static_cast<std::size_t>(r)] * sc * a(r, c);
    }
    return out;
}

/// Operator X acting on `positions` (in X's own factor order) of a `total`-space product.
inline Mat place(const Grading& g, const Mat& x, const std::vector<int>& positions, int total) {
    const int sx = num_spaces(g, x);
    if (static_cast<int>(positions.size()) != sx) throw std::invalid_argument("place: wrong number of positions");
    Mat big = sx == total ? x : tensor_embed(g, x, identity(g, total - sx));
    std::vector<int> dest(static_cast<std::size_t>(total), -1);
    std::vector<bool> used(static_cast<std::size_t>(total), false);
    for (int p = 0; p < sx; ++p) {
        const int pos = positions[static_cast<std::size_t>(p)];
        if (pos < 0 || pos >= total || used[static_cast<std::size_t>(pos)]) throw std::invalid_argument("place: bad position");
        dest[static_cast<std::size_t>(p)] = pos;
        used[static_cast<std::size_t>(pos)] = true;
    }
    int next = 0;
    for (int p = sx; p < total; ++p) {
        while (used[static_cast<std::size_t>(next)]) ++next;
        dest[static_cast<std::size_t>(p)] = next++;
    }
    bool trivial = true;
    for (int p = 0; p < total; ++p) trivial = trivial && dest[static_cast<std::size_t>(p)] == p;
    if (trivial) return big;
    return permute_spaces(big, space_permutation(g, total, dest));
}

inline Mat at_site(const Grading& g, const Mat& x, int site, int total) { return place(g, x, {site}, total); }

/// Graded super-trace over all spaces.
inline cplx super_trace(const Grading& g, const Mat& a) {
    const int s = num_spaces(g, a);
    cplx t = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) t += (index_parity(g, s, i) ? -1.0 : 1.0) * a(i, i);
    return t;
}

/// Super-trace over space 0: (str0 A)_{r,c} = sum_a (-1)^{[a]} A_{(a,r),(a,c)}.
inline Mat partial_super_trace_aux(const Grading& g, const Mat& a) {
    const int s = num_spaces(g, a);
    if (s < 2) throw std::invalid_argument("partial super-trace needs at least two spaces");
    const Eigen::Index n = a.rows() / g.dim();
    Mat out = Mat::Zero(n, n);
    for (int k = 0; k < g.dim(); ++k) out += g.sgn(k) * a.block(k * n, k * n, n, n);
    return out;
}

/// (A^T)_{ji} = (-1)^{[i][j]+[j]} A_{ij} on a single space.
inline Mat transpose_T(const Grading& g, const Mat& a) {
    if (num_spaces(g, a) != 1) throw std::invalid_argument("transpose_T acts on one space");
    Mat out(a.cols(), a.rows());
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j)
            out(j, i) = ((g.parity(i) * g.parity(j) + g.parity(j)) & 1 ? -1.0 : 1.0) * a(i, j);
    return out;
}

/// Sign-transpose on one tensor factor. With V, the factor is further
/// conjugated: A^t = V^{-1} A^T V.
inline Mat partial_transpose(const Grading& g, const Mat& a, int space, const Mat* v = nullptr) {
    const int s = num_spaces(g, a);
    if (space < 0 || space >= s) throw std::invalid_argument("partial_transpose: bad space index");
    const int d = g.dim();
    const Eigen::Index w = detail::ipow(d, s - 1 - space);
    Mat out = Mat::Zero(a.rows(), a.cols());
    std::vector<int> pre(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        int p = 0;
        for (int q = 0; q < space; ++q) p += g.parity(detail::digit(r, d, s, q));
        pre[static_cast<std::size_t>(r)] = p;
    }
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        const int j = detail::digit(c, d, s, space);
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            const cplx val = a(r, c);
            if (val == cplx(0.0)) continue;
            const int i = detail::digit(r, d, s, space);
            const int pi = g.parity(i), pj = g.parity(j);
            const int e = pi * pj + pj + (pi + pj) * (pre[static_cast<std::size_t>(r)] + pre[static_cast<std::size_t>(c)]);
            out(r + (j - i) * w, c + (i - j) * w) += ((e & 1) ? -1.0 : 1.0) * val;
        }
    }
    if (v) {
        const Mat vi = v->inverse();
        out = at_site(g, vi, space, s) * out * at_site(g, *v, space, s);
    }
    return out;
}

enum class Parity { even, odd, mixed, zero };

/// Parity read off the nonzero entries ([row]+[col] constant).
inline Parity operator_parity(const Grading& g, const Mat& a, double tol = 1e-13) {
    const int s = num_spaces(g, a);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const auto pt = parity_table(g, s);
    bool seen0 = false, seen1 = false;
    for (Eigen::Index c = 0; c < a.cols(); ++c)
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            if (std::abs(a(r, c)) > tol * scale) {
                if ((pt[static_cast<std::size_t>(r)] + pt[static_cast<std::size_t>(c)]) & 1) seen1 = true;
                else seen0 = true;
            }
    if (seen0 && seen1) return Parity::mixed;
    if (seen1) return Parity::odd;
    if (seen0) return Parity::even;
    return Parity::zero;
}

/// [A,B} = AB - (-1)^{[A][B]} BA for homogeneous A, B.
inline Mat super_commutator(const Grading& g, const Mat& a, const Mat& b) {
    const Parity pa = operator_parity(g, a), pb = operator_parity(g, b);
    if (pa == Parity::mixed || pb == Parity::mixed)
        throw std::invalid_argument("super_commutator requires homogeneous operators");
    const bool both_odd = pa == Parity::odd && pb == Parity::odd;
    return a * b + (both_odd ? 1.0 : -1.0) * (b * a);
}

/// Component extraction: X = sum_ab e_ab (x) X_ab, so
/// X_ab[r,c] = X[(a,r),(b,c)] (-1)^{[r]([a]+[b])}.
inline Mat aux_component(const Grading& g, const Mat& x, int a, int b) {
    const int s = num_spaces(g, x);
    const Eigen::Index n = x.rows() / g.dim();
    Mat blk = x.block(a * n, b * n, n, n);
    if ((g.parity(a) + g.parity(b)) & 1)
        for (Eigen::Index r = 0; r < n; ++r)
            if (index_parity(g, s - 1, r)) blk.row(r) *= -1.0;
    return blk;
}

inline double max_abs(const Mat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

inline double commutator_norm(const Mat& a, const Mat& b) { return max_abs(a * b - b * a); }

/// max|a - b| scaled by max(1, max|a|, max|b|).
inline double rel_diff(const Mat& a, const Mat& b) {
    return max_abs(a - b) / std::max({1.0, max_abs(a), max_abs(b)});
}

/// Commutator norm scaled by max(1, |a|) max(1, |b|).
inline double rel_commutator(const Mat& a, const Mat& b) {
    return commutator_norm(a, b) / (std::max(1.0, max_abs(a)) * std::max(1.0, max_abs(b)));
}

}  // namespace superbound
