#pragma once

#include "graded_core.hpp"

#include <map>
#include <utility>

namespace superbound {

/// Super-permutation P = sum_ij (-1)^{[j]} e_ij (x) e_ji.
inline Mat permutation_P(const Grading& g) {
    const int d = g.dim();
    Mat p = Mat::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p += g.sgn(j) * tensor_embed(g, unit(g, i, j), unit(g, j, i));
    return p;
}

inline Mat R_rational(const Grading& g, cplx lambda) {
    return lambda * identity(g, 2) + I_c * permutation_P(g);
}

/// Anti-diagonal V = antidiag(1^{m+k}, (-1)^k) for the symmetric grading.
inline Mat twist_V(const Grading& g) {
    if (g.scheme() != Scheme::symmetric) throw std::invalid_argument("V needs the symmetric grading");
    const int d = g.dim();
    Mat v = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) v(i, d - 1 - i) = i < g.m() + g.k() ? 1.0 : -1.0;
    return v;
}

/// Transposition used by the twisted constructions: t (with V) in the
/// symmetric grading, plain sign-transpose otherwise.
inline Mat twist_transpose(const Grading& g, const Mat& a, int space) {
    if (g.scheme() == Scheme::symmetric) {
        const Mat v = twist_V(g);
        return partial_transpose(g, a, space, &v);
    }
    return partial_transpose(g, a, space);
}

/// Q: operator part of R^{t1}(lambda), i.e. P^{t1}.
inline Mat projector_Q(const Grading& g) { return twist_transpose(g, permutation_P(g), 0); }

/// Rbar(lambda) = R^{t1}(-lambda - i rho) = (-lambda - i rho) + i Q.
inline Mat Rbar_rational(const Grading& g, cplx lambda) {
    const cplx lb = -lambda - I_c * g.rho();
    return lb * identity(g, 2) + I_c * projector_Q(g);
}

/// Ordered product L_{0N} ... L_{01} of a two-space operator on (0, s).
inline Mat monodromy_of(const Grading& g, const Mat& l, int sites) {
    if (sites < 1) throw std::invalid_argument("monodromy needs N >= 1");
    const int total = sites + 1;
    Mat t = identity(g, total);
    for (int s = sites; s >= 1; --s) t = t * place(g, l, {0, s}, total);
    return t;
}

inline Mat monodromy_T(const Grading& g, cplx lambda, int sites, bool normalize = false) {
    Mat t = monodromy_of(g, R_rational(g, lambda), sites);
    if (normalize) t /= std::pow(lambda, sites);
    return t;
}

/// Fundamental image of the generator P_ab.
inline Mat generator_fundamental(const Grading& g, int a, int b) { return g.sgn(b) * unit(g, b, a); }

using GeneratorSet = std::map<std::pair<int, int>, Mat>;

/// Delta^{(N)}(P_ab) = sum_k (P_ab at site k).
inline GeneratorSet coproduct_generators(const Grading& g, int sites) {
    GeneratorSet gs;
    for (int a = 0; a < g.dim(); ++a)
        for (int b = 0; b < g.dim(); ++b) {
            const Mat x = generator_fundamental(g, a, b);
            Mat s = Mat::Zero(detail::ipow(g.dim(), sites), detail::ipow(g.dim(), sites));
            for (int k = 0; k < sites; ++k) s += at_site(g, x, k, sites);
            gs[{a, b}] = s;
        }
    return gs;
}

/// Opposite coproduct built as Pi o Delta with Pi the super-permutation (N = 2).
inline GeneratorSet opposite_coproduct_generators(const Grading& g) {
    const GeneratorSet d = coproduct_generators(g, 2);
    const Mat p = permutation_P(g);
    GeneratorSet out;
    for (const auto& [k, v] : d) out[k] = p * v * p;
    return out;
}

/// Delta(L) = L_02 L_01 on (aux, site 1, site 2).
inline Mat coproduct_L(const Grading& g, cplx lambda) {
    const Mat r = R_rational(g, lambda);
    return place(g, r, {0, 2}, 3) * place(g, r, {0, 1}, 3);
}

/// Delta'(L) = L_01 L_02, the opposite coproduct as displayed.
inline Mat opposite_coproduct_L(const Grading& g, cplx lambda) {
    const Mat r = R_rational(g, lambda);
    return place(g, r, {0, 1}, 3) * place(g, r, {0, 2}, 3);
}

/// Pi: graded swap of the two quantum sites, as an operator on (aux, 1, 2).
inline Mat shift_Pi(const Grading& g) { return place(g, permutation_P(g), {1, 2}, 3); }

/// Generators read off Delta'(L): the lambda-linear part of L_01 L_02 is i sum e_ab (x) Delta'(P_ab).
inline GeneratorSet opposite_coproduct_direct(const Grading& g) {
    const Mat lin = (opposite_coproduct_L(g, 1.0) - opposite_coproduct_L(g, -1.0)) / (2.0 * I_c);
    GeneratorSet out;
    for (int a = 0; a < g.dim(); ++a)
        for (int b = 0; b < g.dim(); ++b) out[{a, b}] = aux_component(g, lin, a, b);
    return out;
}

struct RelationResidual {
    double max_residual = 0.0;
    std::string worst;
};

/// The four displayed families of gl(m|n) relations among the P_ab.
inline RelationResidual check_gl_relations(const Grading& g, const GeneratorSet& p) {
    RelationResidual rr;
    const int d = g.dim();
    auto par = [&](int i) { return g.parity(i); };
    auto upd = [&](double r, int i, int j, int k, int l) {
        if (r > rr.max_residual) {
            rr.max_residual = r;
            rr.worst = "[P" + std::to_string(i + 1) + std::to_string(j + 1) + ",P" + std::to_string(k + 1) +
                       std::to_string(l + 1) + "}";
        }
    };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const Mat& a = p.at({i, j});
                    const Mat& b = p.at({k, l});
                    const bool odd = ((par(i) + par(j)) & 1) && ((par(k) + par(l)) & 1);
                    const Mat sc = a * b + (odd ? 1.0 : -1.0) * (b * a);
                    Mat rhs = Mat::Zero(a.rows(), a.cols());
                    if (k != j && i != l) {
                    } else if (l == i && k != j) {
                        rhs = g.sgn(i) * p.at({k, j});
                    } else if (k == j && i != l) {
                        const int e = par(i) * (par(j) + par(l)) + par(j) * par(l);
                        rhs = -((e & 1) ? -1.0 : 1.0) * p.at({i, l});
                    } else {
                        rhs = g.sgn(i) * (p.at({j, j}) - p.at({i, i}));
                    }
                    upd(max_abs(sc - rhs), i, j, k, l);
                }
    return rr;
}

}  // namespace superbound
