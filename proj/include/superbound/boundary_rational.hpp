#pragma once

#include "series.hpp"
#include "verification.hpp"
#include "yangian_rational.hpp"

#include <string>
#include <vector>

namespace superbound {

enum class BoundaryKind { identity, diag_kka, generic, linear };

inline std::string to_string(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::identity: return "identity";
        case BoundaryKind::diag_kka: return "kka";
        case BoundaryKind::generic: return "generic";
        default: return "linear";
    }
}

/// Rational K-matrix family and its parameters.
struct BoundarySpec {
    BoundaryKind kind = BoundaryKind::identity;
    int m1 = 0, m2 = 0, n1 = 0, n2 = 0;  // diag_kka
    Mat K, xi1, xi2;                     // generic: K + xi1/lambda + xi2/lambda^2
    cplx xi = 0.0;                       // linear: i xi + lambda E
    Mat E;
};

/// diag(1^{m1}, -1^{m2+n2}, 1^{n1}).
inline Mat kka_matrix(const Grading& g, int m1, int m2, int n1, int n2) {
    if (g.scheme() != Scheme::distinguished) throw std::invalid_argument("kka needs the distinguished grading");
    if (m1 < 0 || m2 < 0 || n1 < 0 || n2 < 0 || m1 + m2 != g.m() || n1 + n2 != g.n())
        throw std::invalid_argument("kka requires m1+m2 = m and n1+n2 = n");
    Mat k = Mat::Identity(g.dim(), g.dim());
    for (int i = m1; i < g.m() + n2; ++i) k(i, i) = -1.0;
    return k;
}

inline BoundarySpec boundary_identity() { return {}; }

inline BoundarySpec boundary_kka(const Grading& g, int m1, int m2, int n1, int n2) {
    BoundarySpec b;
    b.kind = BoundaryKind::diag_kka;
    b.m1 = m1;
    b.m2 = m2;
    b.n1 = n1;
    b.n2 = n2;
    b.K = kka_matrix(g, m1, m2, n1, n2);
    return b;
}

inline BoundarySpec boundary_generic(const Mat& k, const Mat& xi1, const Mat& xi2) {
    BoundarySpec b;
    b.kind = BoundaryKind::generic;
    b.K = k;
    b.xi1 = xi1;
    b.xi2 = xi2;
    return b;
}

inline BoundarySpec boundary_linear(const Grading& g, cplx xi, const Mat& e) {
    if (e.rows() != g.dim() || e.cols() != g.dim()) throw std::invalid_argument("E must be d x d");
    if (max_abs(e * e - Mat::Identity(g.dim(), g.dim())) > 1e-12) throw std::invalid_argument("linear K needs E^2 = 1");
    BoundarySpec b;
    b.kind = BoundaryKind::linear;
    b.xi = xi;
    b.E = e;
    return b;
}

inline Mat boundary_K(const Grading& g, const BoundarySpec& b, cplx lambda) {
    const Mat id = Mat::Identity(g.dim(), g.dim());
    switch (b.kind) {
        case BoundaryKind::identity: return id;
        case BoundaryKind::diag_kka: return b.K;
        case BoundaryKind::generic: return b.K + b.xi1 / lambda + b.xi2 / (lambda * lambda);
        default: return I_c * b.xi * id + lambda * b.E;
    }
}

/// Coefficients of K in u = 1/lambda after dividing out the leading scalar:
/// {K, xi1, xi2}. The linear family is divided by lambda.
inline std::vector<Mat> boundary_K_series(const Grading& g, const BoundarySpec& b) {
    const Mat id = Mat::Identity(g.dim(), g.dim());
    const Mat z = Mat::Zero(g.dim(), g.dim());
    switch (b.kind) {
        case BoundaryKind::identity: return {id, z, z};
        case BoundaryKind::diag_kka: return {b.K, z, z};
        case BoundaryKind::generic: return {b.K, b.xi1, b.xi2};
        default: return {b.E, I_c * b.xi * id, z};
    }
}

/// T(lambda) K(lambda) T^{-1}(-lambda) on (aux, 1..N).
inline Mat double_row_T(const Grading& g, cplx lambda, const BoundarySpec& b, int sites) {
    const Mat t = monodromy_T(g, lambda, sites);
    const Mat tm = monodromy_T(g, -lambda, sites);
    Eigen::FullPivLU<Mat> lu(tm);
    if (!lu.isInvertible()) throw std::runtime_error("T(-lambda) singular; resample");
    return t * place(g, boundary_K(g, b, lambda), {0}, sites + 1) * lu.inverse();
}

/// t(lambda) = str_0 (K+_0 TT(lambda)).
inline Mat transfer_matrix(const Grading& g, cplx lambda, const BoundarySpec& b, const BoundarySpec& bplus,
                           int sites) {
    const Mat kp = place(g, boundary_K(g, bplus, lambda), {0}, sites + 1);
    return partial_super_trace_aux(g, kp * double_row_T(g, lambda, b, sites));
}

/// Index blocks of the kka boundary: {1..m1} u {m+n2+1..m+n} and {m1+1..m+n2} (1-based).
inline int kka_block(const BoundarySpec& b, const Grading& g, int i) {
    return (i >= b.m1 && i < g.m() + b.n2) ? 1 : 0;
}

/// Preserved generators predicted for the family: the kka blocks, or for the
/// other kinds the generators whose fundamental image commutes with K.
inline bool predicted_preserved(const Grading& g, const BoundarySpec& b, int a, int c) {
    switch (b.kind) {
        case BoundaryKind::identity: return true;
        case BoundaryKind::diag_kka: return kka_block(b, g, a) == kka_block(b, g, c);
        default: {
            const Mat p = generator_fundamental(g, a, c);
            for (const auto& k : boundary_K_series(g, b))
                if (commutator_norm(p, k) > 1e-12) return false;
            return true;
        }
    }
}

inline std::string generator_label(const char* base, int a, int b) {
    return std::string(base) + std::to_string(a + 1) + std::to_string(b + 1);
}

/// Commutator of t(lambda) with every Delta(P_ab), maximised over the given points.
inline ScanReport symmetry_scan(const Grading& g, const BoundarySpec& b, const BoundarySpec& bplus, int sites,
                                const std::vector<cplx>& lambdas, const Tolerances& tol = {}) {
    const GeneratorSet gens = coproduct_generators(g, sites);
    std::vector<Mat> ts;
    for (const cplx l : lambdas) ts.push_back(transfer_matrix(g, l, b, bplus, sites));
    ScanReport rep;
    for (const auto& [ab, x] : gens) {
        GeneratorScan row;
        row.label = generator_label("P", ab.first, ab.second);
        for (const auto& t : ts) row.residual = std::max(row.residual, rel_commutator(t, x));
        row.observed = classify(row.residual, tol);
        row.predicted_preserved = predicted_preserved(g, b, ab.first, ab.second);
        rep.rows.push_back(row);
    }
    return rep;
}

// ---- 1/lambda series ----

/// prod_{k=N..1} (1 + sign i u P_0k), i.e. lambda^{-N} T(sign lambda) up to (sign)^N.
inline OperatorSeries series_monodromy(const Grading& g, int sites, double sign, int order) {
    const int total = sites + 1;
    const Mat p = permutation_P(g);
    OperatorSeries t = OperatorSeries::constant(identity(g, total), order);
    for (int s = sites; s >= 1; --s)
        t = t * OperatorSeries({identity(g, total), sign * I_c * place(g, p, {0, s}, total)}, order);
    return t;
}

/// Normalised double-row object S(u) with TT(lambda) = series_prefactor * S(1/lambda).
inline OperatorSeries series_double_row(const Grading& g, const BoundarySpec& b, int sites, int order) {
    if (order < 2) throw std::invalid_argument("series order must be at least 2");
    const int total = sites + 1;
    std::vector<Mat> kc;
    for (const auto& k : boundary_K_series(g, b)) kc.push_back(place(g, k, {0}, total));
    const OperatorSeries k(kc, order);
    return series_monodromy(g, sites, 1.0, order) * k * series_monodromy(g, sites, -1.0, order).inverse();
}

/// TT(lambda) / S(1/lambda): (-1)^N from T(-lambda), times lambda for the linear family.
inline cplx series_prefactor(const BoundarySpec& b, int sites, cplx lambda) {
    const cplx s = (sites % 2) ? -1.0 : 1.0;
    return b.kind == BoundaryKind::linear ? s * lambda : s;
}

/// Charges read off S(u) = K + i u Q0 - u^2 Q1 + ...
struct ChargeSet {
    int sites = 0;
    Mat q0;                   ///< on (aux, 1..N)
    Mat q1;                   ///< on (aux, 1..N)
    Mat casimir;              ///< str_0 Q1
    std::vector<Mat> higher;  ///< higher[k] = str_0 of the u^{k+1} coefficient
};

inline ChargeSet extract_charges(const Grading& g, const OperatorSeries& s, int sites) {
    ChargeSet c;
    c.sites = sites;
    c.q0 = -I_c * s.coeff(1);
    c.q1 = -s.coeff(2);
    c.casimir = partial_super_trace_aux(g, c.q1);
    for (int k = 1; k <= s.order(); ++k) c.higher.push_back(partial_super_trace_aux(g, s.coeff(k)));
    return c;
}

/// Delta(P) = sum_k P_0k on (aux, 1..N).
inline Mat total_P(const Grading& g, int sites) {
    const int total = sites + 1;
    Mat p = Mat::Zero(detail::ipow(g.dim(), total), detail::ipow(g.dim(), total));
    const Mat p2 = permutation_P(g);
    for (int s = 1; s <= sites; ++s) p += place(g, p2, {0, s}, total);
    return p;
}

/// Q0 = P K + K P - i xi1 (one site or more).
inline Mat q0_closed_form(const Grading& g, const BoundarySpec& b, int sites) {
    const auto kc = boundary_K_series(g, b);
    const Mat p = total_P(g, sites);
    const Mat k = place(g, kc[0], {0}, sites + 1);
    return p * k + k * p - I_c * place(g, kc[1], {0}, sites + 1);
}

/// Q1 = P K P + K P^2 - i P xi1 - i xi1 P - xi2, N = 1.
inline Mat q1_closed_form(const Grading& g, const BoundarySpec& b) {
    const auto kc = boundary_K_series(g, b);
    const Mat p = permutation_P(g);
    const Mat k = place(g, kc[0], {0}, 2), x1 = place(g, kc[1], {0}, 2), x2 = place(g, kc[2], {0}, 2);
    return p * k * p + k * p * p - I_c * p * x1 - I_c * x1 * p - x2;
}

/// 2 sum_ij (-1)^{[j]} P_ij P_ji.
inline Mat casimir_closed_identity(const Grading& g, const GeneratorSet& p) {
    const int d = g.dim();
    Mat c = Mat::Zero(p.at({0, 0}).rows(), p.at({0, 0}).cols());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) c += 2.0 * g.sgn(j) * p.at({i, j}) * p.at({j, i});
    return c;
}

/// kka Casimir: twice the block sum on {1..m1} u {m+n2+1..m+n} minus twice the one on {m1+1..m+n2}.
inline Mat casimir_closed_kka(const Grading& g, const BoundarySpec& b, const GeneratorSet& p) {
    const int d = g.dim();
    Mat c = Mat::Zero(p.at({0, 0}).rows(), p.at({0, 0}).cols());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const int bi = kka_block(b, g, i);
            if (bi != kka_block(b, g, j)) continue;
            c += (bi == 0 ? 2.0 : -2.0) * g.sgn(j) * p.at({i, j}) * p.at({j, i});
        }
    return c;
}

// ---- twisted super Yangian ----

inline Mat twisted_monodromy_hat(const Grading& g, cplx lambda, int sites) {
    const cplx arg = -lambda - I_c * g.rho();
    return twist_transpose(g, monodromy_T(g, arg, sites), 0);
}

/// Tbar(lambda) = T(lambda) K T^{t_0}(-lambda - i rho); sites = 0 gives K itself.
inline Mat twisted_double_row(const Grading& g, cplx lambda, int sites, const Mat& k) {
    if (sites == 0) return k;
    return monodromy_T(g, lambda, sites) * place(g, k, {0}, sites + 1) * twisted_monodromy_hat(g, lambda, sites);
}

/// R12(l1-l2) Tb1 Rbar12(arg) Tb2 = Tb2 Rbar12(arg) Tb1 R12(l1-l2), arg = l1+l2
/// (or l1-l2 when `literal_argument`).
inline double twisted_equation_residual(const Grading& g, cplx l1, cplx l2, int sites, const Mat& k,
                                        bool literal_argument = false) {
    const Mat r = R_rational(g, l1 - l2);
    const Mat rb = Rbar_rational(g, literal_argument ? l1 - l2 : l1 + l2);
    const Mat t1 = twisted_double_row(g, l1, sites, k), t2 = twisted_double_row(g, l2, sites, k);
    return exchange_residual(g, r, t1, rb, t2, t2, rb, t1, r);
}

inline Mat twisted_transfer(const Grading& g, cplx lambda, int sites) {
    return partial_super_trace_aux(g, twisted_double_row(g, lambda, sites, Mat::Identity(g.dim(), g.dim())));
}

inline int osp_dimension(int m, int k) { return m * (m - 1) / 2 + k * (2 * k + 1) + 2 * m * k; }

struct TwistedCharges {
    Mat V;
    Mat q0bar;              ///< Delta(P) - Delta(P)^{t_0} on (aux, 1..N)
    GeneratorSet components;  ///< aux components of q0bar
    int span_rank = 0;
    int expected_rank = 0;
    double closure_residual = 0.0;
    Mat casimir;  ///< str_0 (P Phat), Phat = rho - P^{t_0}
};

namespace detail {

/// Orthonormal basis of the span of the flattened operators.
inline Mat span_basis(const std::vector<Mat>& ops, double rel_tol = 1e-9) {
    const Eigen::Index n = ops.front().size();
    Mat a(n, static_cast<Eigen::Index>(ops.size()));
    for (std::size_t i = 0; i < ops.size(); ++i)
        a.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vec>(ops[i].data(), n);
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > rel_tol * sv(0)) ++r;
    return svd.matrixU().leftCols(r);
}

inline double span_distance(const Mat& basis, const Mat& x) {
    const Vec v = Eigen::Map<const Vec>(x.data(), x.size());
    const Vec res = v - basis * (basis.adjoint() * v);
    return res.cwiseAbs().maxCoeff() / std::max(1.0, v.cwiseAbs().maxCoeff());
}

}  // namespace detail

inline TwistedCharges twisted_objects(const Grading& g, int sites) {
    if (g.scheme() != Scheme::symmetric) throw std::invalid_argument("twisted objects need the symmetric grading");
    TwistedCharges tc;
    tc.V = twist_V(g);
    const Mat p = total_P(g, sites);
    const Mat pt = twist_transpose(g, p, 0);
    tc.q0bar = p - pt;
    std::vector<Mat> ops;
    for (int a = 0; a < g.dim(); ++a)
        for (int b = 0; b < g.dim(); ++b) {
            tc.components[{a, b}] = aux_component(g, tc.q0bar, a, b);
            ops.push_back(tc.components[{a, b}]);
        }
    const Mat basis = detail::span_basis(ops);
    tc.span_rank = static_cast<int>(basis.cols());
    tc.expected_rank = osp_dimension(g.m(), g.k());
    for (const auto& x : ops) {
        if (max_abs(x) == 0.0) continue;
        for (const auto& y : ops) {
            if (max_abs(y) == 0.0) continue;
            tc.closure_residual = std::max(tc.closure_residual, detail::span_distance(basis, super_commutator(g, x, y)));
        }
    }
    const Mat phat = g.rho() * identity(g, sites + 1) - pt;
    tc.casimir = partial_super_trace_aux(g, p * phat);
    return tc;
}

/// [t(lambda), qbar_ab] for the osp generators, plus the gl generators
/// outside their span as a negative control.
inline ScanReport twisted_symmetry_scan(const Grading& g, int sites, const std::vector<cplx>& lambdas,
                                        const Tolerances& tol = {}) {
    const TwistedCharges tc = twisted_objects(g, sites);
    std::vector<Mat> ops;
    for (const auto& [ab, x] : tc.components) ops.push_back(x);
    const Mat basis = detail::span_basis(ops);
    std::vector<Mat> ts;
    for (const cplx l : lambdas) ts.push_back(twisted_transfer(g, l, sites));
    ScanReport rep;
    auto scan = [&](const std::string& label, const Mat& x, bool predicted) {
        GeneratorScan row;
        row.label = label;
        for (const auto& t : ts) row.residual = std::max(row.residual, rel_commutator(t, x));
        row.observed = classify(row.residual, tol);
        row.predicted_preserved = predicted;
        rep.rows.push_back(row);
    };
    for (const auto& [ab, x] : tc.components)
        if (max_abs(x) > 0.0) scan(generator_label("Qbar", ab.first, ab.second), x, true);
    for (const auto& [ab, x] : coproduct_generators(g, sites))
        if (detail::span_distance(basis, x) > 1e-8) scan(generator_label("P", ab.first, ab.second), x, false);
    return rep;
}

}  // namespace superbound
