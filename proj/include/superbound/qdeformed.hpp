#pragma once

#include "verification.hpp"
#include "yangian_rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace superbound {

/// Deformation parameter; q = e^{i mu}.
struct QParams {
    cplx mu{0.3, 0.1};
    cplx q() const { return std::exp(I_c * mu); }
};

/// Trigonometric R(lambda): a_j on e_jj(x)e_jj, sinh(lambda) on e_ii(x)e_jj, c_ij on e_ij(x)e_ji.
inline Mat R_trig(const Grading& g, cplx lambda, const QParams& qp) {
    const int d = g.dim();
    Mat r = Mat::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i == j) {
                r += std::sinh(lambda + I_c * qp.mu - 2.0 * I_c * qp.mu * double(g.parity(j))) *
                     tensor_embed(g, unit(g, i, i), unit(g, i, i));
                continue;
            }
            r += std::sinh(lambda) * tensor_embed(g, unit(g, i, i), unit(g, j, j));
            const double sg = j > i ? 1.0 : -1.0;
            r += std::sinh(I_c * qp.mu) * std::exp(sg * lambda) * g.sgn(j) * tensor_embed(g, unit(g, i, j), unit(g, j, i));
        }
    return r;
}

/// X_21 = P X_12 P.
inline Mat swap21(const Grading& g, const Mat& x) {
    const Mat p = permutation_P(g);
    return p * x * p;
}

struct RPair {
    Mat plus, minus;
};

/// R+ = lim 2 e^{-lambda} R(lambda) at +inf, R- = lim 2 e^{lambda} R(lambda) at -inf.
inline RPair R_pm(const Grading& g, const QParams& qp) {
    const int d = g.dim();
    RPair rp{Mat::Zero(d * d, d * d), Mat::Zero(d * d, d * d)};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i == j) {
                const cplx x = I_c * qp.mu * (1.0 - 2.0 * g.parity(j));
                const Mat u = tensor_embed(g, unit(g, i, i), unit(g, i, i));
                rp.plus += std::exp(x) * u;
                rp.minus -= std::exp(-x) * u;
                continue;
            }
            const Mat u = tensor_embed(g, unit(g, i, i), unit(g, j, j));
            rp.plus += u;
            rp.minus -= u;
            const Mat c = 2.0 * std::sinh(I_c * qp.mu) * g.sgn(j) * tensor_embed(g, unit(g, i, j), unit(g, j, i));
            (j > i ? rp.plus : rp.minus) += c;
        }
    return rp;
}

/// M = sum_k q^{d-2k+1} q^{-2[k] + 4 sum_{i<=k} [i]} e_kk (k 1-based).
inline Mat M_matrix(const Grading& g, const QParams& qp) {
    const int d = g.dim();
    Mat m = Mat::Zero(d, d);
    int acc = 0;
    for (int k = 1; k <= d; ++k) {
        acc += g.parity(k - 1);
        m(k - 1, k - 1) = std::pow(qp.q(), double(d - 2 * k + 1 - 2 * g.parity(k - 1) + 4 * acc));
    }
    return m;
}

// ---- U_q(gl(m|n)) in the fundamental representation ----

/// How q^{eps_i} acts on basis vector i: q^{+1} (unit) or q^{(-1)^{[i]}} (graded).
enum class WeightConvention { unit, graded };

inline std::string to_string(WeightConvention w) { return w == WeightConvention::unit ? "unit" : "graded"; }

inline double uq_weight(const Grading& g, int i, WeightConvention w = WeightConvention::graded) {
    return w == WeightConvention::unit ? 1.0 : g.sgn(i);
}

namespace detail {

inline Mat tensor_power(const Grading& g, const std::vector<Mat>& ops) {
    Mat x = ops.front();
    for (std::size_t k = 1; k < ops.size(); ++k) x = tensor_embed(g, x, ops[k]);
    return x;
}

}  // namespace detail

/// Delta^{(N)} of the group-like q^{sum_i c_i eps_i}.
inline Mat uq_group(const Grading& g, const QParams& qp, int sites, const std::vector<double>& expo,
                    WeightConvention w = WeightConvention::graded) {
    Mat x = Mat::Zero(g.dim(), g.dim());
    for (int i = 0; i < g.dim(); ++i)
        x(i, i) = std::pow(qp.q(), expo[static_cast<std::size_t>(i)] * uq_weight(g, i, w));
    return detail::tensor_power(g, std::vector<Mat>(static_cast<std::size_t>(sites), x));
}

struct UqGenerators {
    int sites = 0;
    std::vector<Mat> qeps;  ///< Delta(q^{eps_i}), i = 0..d-1
    std::vector<Mat> e, f;  ///< Delta(e_j), Delta(f_j), j = 0..d-2
};

/// One-site matrices: e_j = e_{j,j+1}; f_j = e_{j+1,j}, negated for odd j.
inline Mat uq_e1(const Grading& g, int j) { return unit(g, j, j + 1); }
inline Mat uq_f1(const Grading& g, int j) { return (g.parity(j) ? -1.0 : 1.0) * unit(g, j + 1, j); }

/// q^{h_j / 2} on one site, h_j = eps_j - eps_{j+1}.
inline Mat uq_khalf1(const Grading& g, const QParams& qp, int j) {
    std::vector<double> ex(static_cast<std::size_t>(g.dim()), 0.0);
    ex[static_cast<std::size_t>(j)] = 0.5;
    ex[static_cast<std::size_t>(j + 1)] = -0.5;
    return uq_group(g, qp, 1, ex);
}

/// Delta^{(N)}(x) = sum_s (q^{-h/2})^{(x) s} (x) x (x) (q^{h/2})^{(x) N-s-1}.
inline Mat uq_primitive_coproduct(const Grading& g, const Mat& x, const Mat& kh, int sites) {
    const Mat khi = kh.inverse();
    const Eigen::Index n = detail::ipow(g.dim(), sites);
    Mat tot = Mat::Zero(n, n);
    for (int s = 0; s < sites; ++s) {
        std::vector<Mat> ops;
        for (int r = 0; r < sites; ++r) ops.push_back(r < s ? khi : (r == s ? x : kh));
        tot += detail::tensor_power(g, ops);
    }
    return tot;
}

inline UqGenerators uq_fundamental(const Grading& g, const QParams& qp, int sites) {
    if (sites < 1) throw std::invalid_argument("need at least one site");
    UqGenerators u;
    u.sites = sites;
    const int d = g.dim();
    for (int i = 0; i < d; ++i) {
        std::vector<double> ex(static_cast<std::size_t>(d), 0.0);
        ex[static_cast<std::size_t>(i)] = 1.0;
        u.qeps.push_back(uq_group(g, qp, sites, ex));
    }
    for (int j = 0; j + 1 < d; ++j) {
        const Mat kh = uq_khalf1(g, qp, j);
        u.e.push_back(uq_primitive_coproduct(g, uq_e1(g, j), kh, sites));
        u.f.push_back(uq_primitive_coproduct(g, uq_f1(g, j), kh, sites));
    }
    return u;
}

/// a_ij = (alpha_i, alpha_j) with (eps_a, eps_b) = (-1)^{[a]} delta_ab.
inline Eigen::MatrixXi cartan_matrix(const Grading& g) {
    const int r = g.dim() - 1;
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(std::max(r, 0), std::max(r, 0));
    auto s = [&](int i) { return g.parity(i) ? -1 : 1; };
    for (int i = 0; i < r; ++i) {
        a(i, i) = s(i) + s(i + 1);
        if (i + 1 < r) {
            a(i, i + 1) = -s(i + 1);
            a(i + 1, i) = -s(i + 1);
        }
    }
    return a;
}

/// Exchange relations, E-F relations and Chevalley-Serre relations away from odd roots.
inline RelationResidual check_uq_relations(const Grading& g, const QParams& qp, const UqGenerators& u) {
    RelationResidual rr;
    const int d = g.dim();
    const cplx q = qp.q();
    auto upd = [&](double r, const std::string& what) {
        if (r > rr.max_residual) {
            rr.max_residual = r;
            rr.worst = what;
        }
    };
    auto sp = [&](int i) { return (g.parity(i) + g.parity(i + 1)) & 1; };
    for (int i = 0; i < d; ++i) {
        upd(rel_diff(u.qeps[static_cast<std::size_t>(i)] * u.qeps[static_cast<std::size_t>(i)].inverse(),
                     Mat::Identity(u.qeps[0].rows(), u.qeps[0].cols())),
            "q^eps q^-eps");
        for (int j = 0; j + 1 < d; ++j) {
            const double ex = g.sgn(j) * (i == j) - g.sgn(j + 1) * (i == j + 1);
            const Mat& k = u.qeps[static_cast<std::size_t>(i)];
            const Mat& e = u.e[static_cast<std::size_t>(j)];
            const Mat& f = u.f[static_cast<std::size_t>(j)];
            upd(rel_diff(k * e, std::pow(q, ex) * e * k), "q^eps" + std::to_string(i + 1) + " e" + std::to_string(j + 1));
            upd(rel_diff(k * f, std::pow(q, -ex) * f * k), "q^eps" + std::to_string(i + 1) + " f" + std::to_string(j + 1));
        }
    }
    for (int i = 0; i + 1 < d; ++i)
        for (int j = 0; j + 1 < d; ++j) {
            const double s = (sp(i) * sp(j)) ? -1.0 : 1.0;
            const Mat& ei = u.e[static_cast<std::size_t>(i)];
            const Mat& fj = u.f[static_cast<std::size_t>(j)];
            Mat rhs = Mat::Zero(ei.rows(), ei.cols());
            if (i == j) {
                const Mat kk = u.qeps[static_cast<std::size_t>(i)] * u.qeps[static_cast<std::size_t>(i + 1)].inverse();
                rhs = (kk - kk.inverse()) / (q - 1.0 / q);
            }
            upd(rel_diff(ei * fj - s * fj * ei, rhs), "e" + std::to_string(i + 1) + " f" + std::to_string(j + 1));
            if (std::abs(i - j) >= 2 || (i == j && sp(i))) {
                const Mat& ej = u.e[static_cast<std::size_t>(j)];
                const Mat& fi = u.f[static_cast<std::size_t>(i)];
                upd(rel_diff(ei * ej, s * ej * ei), "e" + std::to_string(i + 1) + " e" + std::to_string(j + 1));
                upd(rel_diff(fi * fj, s * fj * fi), "f" + std::to_string(i + 1) + " f" + std::to_string(j + 1));
            }
        }
    for (int i = 0; i + 1 < d; ++i) {
        if (sp(i)) continue;
        for (int j : {i - 1, i + 1}) {
            if (j < 0 || j + 1 >= d) continue;
            for (const auto* xs : {&u.e, &u.f}) {
                const Mat& x = (*xs)[static_cast<std::size_t>(i)];
                const Mat& y = (*xs)[static_cast<std::size_t>(j)];
                upd(max_abs(x * x * y - (q + 1.0 / q) * x * y * x + y * x * x),
                    "serre " + std::to_string(i + 1) + "," + std::to_string(j + 1));
            }
        }
    }
    return rr;
}

/// q^{h_i} e_j q^{-h_i} = q^{a_ij} e_j, read against the Cartan matrix.
inline double check_cartan_weights(const Grading& g, const QParams& qp, const UqGenerators& u) {
    const auto a = cartan_matrix(g);
    double r = 0.0;
    for (int i = 0; i + 1 < g.dim(); ++i) {
        const Mat h = u.qeps[static_cast<std::size_t>(i)] * u.qeps[static_cast<std::size_t>(i + 1)].inverse();
        for (int j = 0; j + 1 < g.dim(); ++j) {
            const Mat& e = u.e[static_cast<std::size_t>(j)];
            r = std::max(r, rel_diff(h * e * h.inverse(), std::pow(qp.q(), double(a(i, j))) * e));
        }
    }
    return r;
}

// ---- L+- from the generators ----

struct LpmIdentification {
    WeightConvention convention = WeightConvention::graded;
    Mat Lp_literal, Lm_literal;      ///< displayed diagonal and nearest-neighbour entries only
    Mat Lp, Lm;                      ///< gauge-fixed, long-range entries supplied from R+-
    cplx scale_plus, scale_minus;    ///< fixed on the (1,1)(x)(1,1) entry
    std::vector<cplx> gauge_plus;    ///< per-root factor on aux entry (i,i+1) of L+
    std::vector<cplx> gauge_minus;   ///< per-root factor on aux entry (i+1,i) of L-
    double diag_deviation = 0.0;     ///< aux-diagonal blocks after the (-1)^{[i]} row sign
    double block_deviation = 0.0;    ///< nearest-neighbour blocks after the per-root factor
    int supplied_blocks = 0;         ///< aux blocks |i-j| >= 2 taken from R+-
    double lax_residual = 0.0;       ///< e^l L+ - e^{-l} L- against 2 R(l)
};

namespace detail {

inline Mat aux_block(const Grading& g, const Mat& x, int a, int b) { return aux_component(g, x, a, b); }

inline void put_aux_block(const Grading& g, Mat& x, int a, int b, const Mat& blk) {
    x += tensor_embed(g, unit(g, a, b), blk);
}

}  // namespace detail

/// Assembles L+- from l+_ii = (-1)^{[i]} q^{eps_i}, l+_{i,i+1} = (-1)^{[i+1]} (q-q^{-1}) q^{(eps_i+eps_{i+1})/2} f_i,
/// l-_ii = (-1)^{[i]} q^{-eps_i}, l-_{i+1,i} = -(-1)^{[i]} (q-q^{-1}) e_i q^{-(eps_i+eps_{i+1})/2},
/// then fixes the gauge against R+-.
inline LpmIdentification L_pm_from_generators(const Grading& g, const QParams& qp,
                                               WeightConvention conv = WeightConvention::graded,
                                               cplx lax_point = {0.37, 0.21}) {
    const int d = g.dim();
    const cplx q = qp.q();
    LpmIdentification id;
    id.convention = conv;
    const RPair r = R_pm(g, qp);
    id.Lp_literal = Mat::Zero(d * d, d * d);
    id.Lm_literal = Mat::Zero(d * d, d * d);
    auto grp = [&](std::vector<double> ex) { return uq_group(g, qp, 1, ex, conv); };
    for (int i = 0; i < d; ++i) {
        std::vector<double> ex(static_cast<std::size_t>(d), 0.0);
        ex[static_cast<std::size_t>(i)] = 1.0;
        const Mat qe = grp(ex);
        detail::put_aux_block(g, id.Lp_literal, i, i, g.sgn(i) * qe);
        detail::put_aux_block(g, id.Lm_literal, i, i, g.sgn(i) * qe.inverse());
    }
    for (int i = 0; i + 1 < d; ++i) {
        std::vector<double> ex(static_cast<std::size_t>(d), 0.0);
        ex[static_cast<std::size_t>(i)] = 0.5;
        ex[static_cast<std::size_t>(i + 1)] = 0.5;
        const Mat hs = grp(ex);
        detail::put_aux_block(g, id.Lp_literal, i, i + 1, g.sgn(i + 1) * (q - 1.0 / q) * hs * uq_f1(g, i));
        detail::put_aux_block(g, id.Lm_literal, i + 1, i, -g.sgn(i) * (q - 1.0 / q) * uq_e1(g, i) * hs.inverse());
    }
    id.scale_plus = r.plus(0, 0) / (g.sgn(0) * id.Lp_literal(0, 0));
    id.scale_minus = r.minus(0, 0) / (g.sgn(0) * id.Lm_literal(0, 0));
    id.Lp = Mat::Zero(d * d, d * d);
    id.Lm = Mat::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            for (int pm = 0; pm < 2; ++pm) {
                const Mat& lit = pm == 0 ? id.Lp_literal : id.Lm_literal;
                const Mat& ref = pm == 0 ? r.plus : r.minus;
                const cplx scale = pm == 0 ? id.scale_plus : id.scale_minus;
                Mat& out = pm == 0 ? id.Lp : id.Lm;
                const Mat rb = detail::aux_block(g, ref, a, b);
                const Mat lb = g.sgn(a) * scale * detail::aux_block(g, lit, a, b);
                const bool nn = pm == 0 ? (b == a + 1) : (a == b + 1);
                if (a == b) {
                    id.diag_deviation = std::max(id.diag_deviation, rel_diff(lb, rb));
                    detail::put_aux_block(g, out, a, b, lb);
                } else if (nn) {
                    Eigen::Index r0, c0;
                    rb.cwiseAbs().maxCoeff(&r0, &c0);
                    const cplx gf = rb(r0, c0) / lb(r0, c0);
                    (pm == 0 ? id.gauge_plus : id.gauge_minus).push_back(gf);
                    id.block_deviation = std::max(id.block_deviation, rel_diff(gf * lb, rb));
                    detail::put_aux_block(g, out, a, b, gf * lb);
                } else if (max_abs(rb) > 0.0) {
                    ++id.supplied_blocks;
                    detail::put_aux_block(g, out, a, b, rb);
                }
            }
        }
    const Mat lax = std::exp(lax_point) * id.Lp + std::exp(-lax_point) * id.Lm;
    id.lax_residual = rel_diff(lax, 2.0 * R_trig(g, lax_point, qp));
    return id;
}

inline double deviation(const LpmIdentification& id) {
    return std::max({id.diag_deviation, id.block_deviation, id.lax_residual});
}

/// Tries the unit weight convention first, then the graded one; keeps the first
/// for which L+- match R+- (the better one if neither does).
inline LpmIdentification select_L_pm(const Grading& g, const QParams& qp, double tol = 1e-10) {
    const auto unit_w = L_pm_from_generators(g, qp, WeightConvention::unit);
    if (deviation(unit_w) < tol) return unit_w;
    const auto graded_w = L_pm_from_generators(g, qp, WeightConvention::graded);
    return deviation(graded_w) <= deviation(unit_w) ? graded_w : unit_w;
}

/// Maximum residual of the FRT relations R L1 L2 = L2 L1 R for the displayed pairings
/// (R+- with L+L+ and L-L-, R+ with L+L-, R- with L-L+). L+- may carry N quantum sites.
inline double frt_residual(const Grading& g, const RPair& r, const Mat& lp, const Mat& lm) {
    const Mat one = identity(g, 2);
    auto rel = [&](const Mat& rx, const Mat& a, const Mat& b) {
        return exchange_residual(g, rx, a, one, b, b, one, a, rx);
    };
    double res = 0.0;
    for (const Mat* rx : {&r.plus, &r.minus})
        for (const Mat* l : {&lp, &lm}) res = std::max(res, rel(*rx, *l, *l));
    res = std::max(res, rel(r.plus, lp, lm));
    res = std::max(res, rel(r.minus, lm, lp));
    return res;
}

/// Spectral points to avoid in the trigonometric sector (zeros of sinh and of the a_j).
inline std::vector<cplx> trig_exclusions(const QParams& qp) {
    const cplx im = I_c * qp.mu, ipi = I_c * 3.14159265358979323846;
    return {0.0, im, -im, ipi, -ipi, im - ipi, -im + ipi};
}

// ---- boundaries ----

enum class Sector { bosonic, fermionic };

/// Non-diagonal K family. c_a for the paired index a <= L; c_abar is 1.
struct NonDiagBoundary {
    Scheme diagram = Scheme::symmetric;
    Sector sector = Sector::bosonic;
    int L = 1;
    cplx m_b{1.3, 0.0};
    cplx zeta{0.2, 0.0};
    std::map<int, cplx> c;  ///< keyed by 0-based paired index a; missing means 1
};

/// Conjugate index (0-based).
inline int conjugate_index(const Grading& g, int a) {
    const int d = g.dim();
    if (g.scheme() == Scheme::symmetric) return d - 1 - a;
    if (g.parity(a) == 0) return g.m() - 1 - a;
    return 2 * g.m() + g.n() - 1 - a;
}

/// Paired indices (a, abar), 0-based.
inline std::vector<std::pair<int, int>> nondiag_pairs(const Grading& g, const NonDiagBoundary& b) {
    if (g.scheme() != b.diagram) throw std::invalid_argument("diagram does not match the grading");
    int lo = 1, hi = 0;
    if (b.diagram == Scheme::symmetric) {
        hi = g.dim() / 2;
    } else if (b.sector == Sector::bosonic) {
        hi = g.m() / 2;
    } else {
        lo = g.m() + 1;
        hi = g.m() + g.n() / 2;
    }
    if (b.L < lo || b.L > hi) throw std::invalid_argument("L out of range for this family");
    std::vector<std::pair<int, int>> pr;
    for (int a = lo; a <= b.L; ++a) pr.emplace_back(a - 1, conjugate_index(g, a - 1));
    return pr;
}

inline Mat K_nondiag(const Grading& g, const NonDiagBoundary& b, cplx lambda, const QParams& qp) {
    const int d = g.dim();
    const cplx z = std::cosh(2.0 * I_c * qp.mu * b.zeta);
    const cplx ch = std::cosh(I_c * qp.mu * b.m_b);
    Mat k = Mat::Zero(d, d);
    for (int a = 0; a < d; ++a) k(a, a) = std::cosh(2.0 * lambda + I_c * b.m_b * qp.mu) - z;
    for (const auto& [a, ab] : nondiag_pairs(g, b)) {
        const auto it = b.c.find(a);
        const cplx ca = it == b.c.end() ? cplx(1.0) : it->second;
        k(a, a) = std::exp(2.0 * lambda) * ch - z;
        k(ab, ab) = std::exp(-2.0 * lambda) * ch - z;
        k(a, ab) = I_c * ca * std::sinh(2.0 * lambda);
        k(ab, a) = I_c * std::sinh(2.0 * lambda);
    }
    return k;
}

enum class TrigKind { identity, kdiag, nondiag };

struct TrigBoundary {
    TrigKind kind = TrigKind::identity;
    int alpha = 0;      ///< kdiag: number of leading a(lambda) entries
    cplx xi{0.4, 0.2};  ///< kdiag parameter
    NonDiagBoundary nd;
};

inline std::string to_string(TrigKind k) {
    switch (k) {
        case TrigKind::identity: return "identity";
        case TrigKind::kdiag: return "kdiag";
        default: return "nondiag";
    }
}

/// kdiag: a = e^l sinh(xi + l) on the first alpha entries, b = e^{-l} sinh(xi - l) on the rest.
inline Mat K_trig(const Grading& g, const TrigBoundary& b, cplx lambda, const QParams& qp) {
    const int d = g.dim();
    switch (b.kind) {
        case TrigKind::identity: return Mat::Identity(d, d);
        case TrigKind::kdiag: {
            if (b.alpha < 0 || b.alpha > d) throw std::invalid_argument("alpha out of range");
            Mat k = Mat::Zero(d, d);
            for (int i = 0; i < d; ++i)
                k(i, i) = i < b.alpha ? std::exp(lambda) * std::sinh(b.xi + lambda)
                                      : std::exp(-lambda) * std::sinh(b.xi - lambda);
            return k;
        }
        default: return K_nondiag(g, b.nd, lambda, qp);
    }
}

/// Highest (top) or lowest (bottom) coefficient of K as a Laurent polynomial in e^{2 lambda}.
inline Mat K_asymptotic(const Grading& g, const TrigBoundary& b, const QParams& qp, bool top) {
    const int d = g.dim();
    switch (b.kind) {
        case TrigKind::identity: return Mat::Identity(d, d);
        case TrigKind::kdiag: {
            Mat k = Mat::Zero(d, d);
            for (int i = 0; i < d; ++i) k(i, i) = ((i < b.alpha) == top) ? 1.0 : 0.0;
            return k;
        }
        default: {
            const double s = top ? 1.0 : -1.0;
            Mat k = Mat::Zero(d, d);
            for (int a = 0; a < d; ++a) k(a, a) = 0.5 * std::exp(s * I_c * b.nd.m_b * qp.mu);
            const cplx ch = std::cosh(I_c * qp.mu * b.nd.m_b);
            for (const auto& [a, ab] : nondiag_pairs(g, b.nd)) {
                const auto it = b.nd.c.find(a);
                const cplx ca = it == b.nd.c.end() ? cplx(1.0) : it->second;
                k(a, a) = top ? ch : 0.0;
                k(ab, ab) = top ? 0.0 : ch;
                k(a, ab) = s * 0.5 * I_c * ca;
                k(ab, a) = s * 0.5 * I_c;
            }
            return k;
        }
    }
}

inline Mat monodromy_trig(const Grading& g, cplx lambda, const QParams& qp, int sites) {
    return monodromy_of(g, R_trig(g, lambda, qp), sites);
}

inline Mat double_row_trig(const Grading& g, cplx lambda, const TrigBoundary& b, const QParams& qp, int sites) {
    const Mat tm = monodromy_trig(g, -lambda, qp, sites);
    Eigen::FullPivLU<Mat> lu(tm);
    if (!lu.isInvertible()) throw std::runtime_error("T(-lambda) singular; resample");
    return monodromy_trig(g, lambda, qp, sites) * place(g, K_trig(g, b, lambda, qp), {0}, sites + 1) * lu.inverse();
}

/// t(lambda) = str_0 (M_0 T K T^{-1}(-lambda)).
inline Mat open_transfer_trig(const Grading& g, cplx lambda, const TrigBoundary& b, const QParams& qp, int sites) {
    const Mat m = place(g, M_matrix(g, qp), {0}, sites + 1);
    return partial_super_trace_aux(g, m * double_row_trig(g, lambda, b, qp, sites));
}

/// Reflection-equation residual with the trigonometric R (R21 = P R P).
inline double reflection_residual_trig(const Grading& g, const QParams& qp, const Mat& k1, const Mat& k2, cplx l1,
                                       cplx l2) {
    const Mat a = R_trig(g, l1 - l2, qp);
    const Mat bsum = R_trig(g, l1 + l2, qp);
    return exchange_residual(g, a, k1, swap21(g, bsum), k2, k2, bsum, k1, swap21(g, a));
}

// ---- non-local charges and q-Casimirs ----

struct TrigCharges {
    Mat plus, minus;  ///< TT+- on (aux, 1..N)
};

/// TT+ = T+ K_top (T-)^{-1}, TT- = T- K_bottom (T+)^{-1}, with T+- built from L+-.
inline TrigCharges boundary_charges(const Grading& g, const TrigBoundary& b, const QParams& qp, int sites,
                                    const LpmIdentification& lpm) {
    const Mat tp = monodromy_of(g, lpm.Lp, sites);
    const Mat tm = monodromy_of(g, lpm.Lm, sites);
    const int total = sites + 1;
    TrigCharges c;
    c.plus = tp * place(g, K_asymptotic(g, b, qp, true), {0}, total) * tm.inverse();
    c.minus = tm * place(g, K_asymptotic(g, b, qp, false), {0}, total) * tp.inverse();
    return c;
}

struct QCasimirs {
    Mat plus, minus;
};

inline QCasimirs q_casimirs(const Grading& g, const TrigCharges& c, const QParams& qp) {
    const int s = num_spaces(g, c.plus);
    const Mat m = place(g, M_matrix(g, qp), {0}, s);
    return {partial_super_trace_aux(g, m * c.plus), partial_super_trace_aux(g, m * c.minus)};
}

enum class QCasimirCase { gl11_identity, gl21_kdiag2, gl22_kdiag2 };

/// Closed forms for C+- in the three worked cases.
inline QCasimirs qcasimir_closed_form(const Grading& g, const QParams& qp, int sites, QCasimirCase which) {
    const cplx q = qp.q();
    const cplx dq2 = (q - 1.0 / q) * (q - 1.0 / q);
    const UqGenerators u = uq_fundamental(g, qp, sites);
    auto grp = [&](std::vector<double> ex) {
        ex.resize(static_cast<std::size_t>(g.dim()), 0.0);
        return uq_group(g, qp, sites, ex);
    };
    QCasimirs c;
    switch (which) {
        case QCasimirCase::gl11_identity: {
            const Mat h = grp({0.5, 0.5}), hm = grp({-0.5, -0.5});
            c.plus = grp({2, 0}) - grp({0, 2}) - dq2 * h * u.e[0] * h * u.f[0];
            c.minus = grp({-2, 0}) - grp({0, -2}) - dq2 * u.e[0] * hm * u.f[0] * hm;
            break;
        }
        case QCasimirCase::gl21_kdiag2:
            c.plus = q * q * grp({1, 1}) * (q * grp({1, -1}) + grp({-1, 1}) / q + dq2 * u.f[0] * u.e[0]);
            c.minus = q * q * grp({0, 0, -2});
            break;
        case QCasimirCase::gl22_kdiag2:
            c.plus = q * q * grp({1, 1}) * (q * grp({1, -1}) + grp({-1, 1}) / q + dq2 * u.f[0] * u.e[0]);
            c.minus = q * q * grp({0, 0, -1, -1}) * (q * grp({0, 0, -1, 1}) + grp({0, 0, 1, -1}) / q - dq2 * u.f[2] * u.e[2]);
            break;
    }
    return c;
}

struct Proportionality {
    cplx constant;
    double residual = 0.0;  ///< max|A - c B| / max|A|
};

inline Proportionality proportionality(const Mat& a, const Mat& b) {
    const Eigen::Index n = a.size();
    const Vec va = Eigen::Map<const Vec>(a.data(), n), vb = Eigen::Map<const Vec>(b.data(), n);
    Proportionality p;
    p.constant = vb.dot(va) / vb.dot(vb);
    p.residual = (va - p.constant * vb).cwiseAbs().maxCoeff() / std::max(1e-300, va.cwiseAbs().maxCoeff());
    return p;
}

// ---- symmetry scan ----

/// Preserved generator prediction: q^{eps_i} index i, e_j/f_j root j (0-based).
struct UqPrediction {
    std::vector<bool> qeps, ef;
};

/// identity: everything; kdiag(alpha): all but e_alpha, f_alpha; nondiag: generators inside
/// the inner index window {L+1, ..., d-L} (1-based).
inline UqPrediction predicted_uq_symmetry(const Grading& g, const TrigBoundary& b) {
    const int d = g.dim();
    UqPrediction p{std::vector<bool>(static_cast<std::size_t>(d), true), std::vector<bool>(static_cast<std::size_t>(d - 1), true)};
    if (b.kind == TrigKind::kdiag) {
        if (b.alpha >= 1 && b.alpha <= d - 1) p.ef[static_cast<std::size_t>(b.alpha - 1)] = false;
    } else if (b.kind == TrigKind::nondiag) {
        const auto pairs = nondiag_pairs(g, b.nd);
        std::vector<bool> touched(static_cast<std::size_t>(d), false);
        for (const auto& [a, ab] : pairs) touched[static_cast<std::size_t>(a)] = touched[static_cast<std::size_t>(ab)] = true;
        for (int i = 0; i < d; ++i) p.qeps[static_cast<std::size_t>(i)] = !touched[static_cast<std::size_t>(i)];
        for (int j = 0; j + 1 < d; ++j)
            p.ef[static_cast<std::size_t>(j)] = !touched[static_cast<std::size_t>(j)] && !touched[static_cast<std::size_t>(j + 1)];
    }
    return p;
}

inline ScanReport symmetry_scan_q(const Grading& g, const TrigBoundary& b, const QParams& qp, int sites,
                                  const std::vector<cplx>& lambdas, const Tolerances& tol = {}) {
    const UqGenerators u = uq_fundamental(g, qp, sites);
    const UqPrediction pred = predicted_uq_symmetry(g, b);
    std::vector<Mat> ts;
    for (const cplx l : lambdas) ts.push_back(open_transfer_trig(g, l, b, qp, sites));
    ScanReport rep;
    auto scan = [&](const std::string& label, const Mat& x, bool predicted) {
        GeneratorScan row;
        row.label = label;
        for (const auto& t : ts) row.residual = std::max(row.residual, rel_commutator(t, x));
        row.observed = classify(row.residual, tol);
        row.predicted_preserved = predicted;
        rep.rows.push_back(row);
    };
    for (int i = 0; i < g.dim(); ++i) scan("q^eps" + std::to_string(i + 1), u.qeps[static_cast<std::size_t>(i)], pred.qeps[static_cast<std::size_t>(i)]);
    for (int j = 0; j + 1 < g.dim(); ++j) {
        scan("e" + std::to_string(j + 1), u.e[static_cast<std::size_t>(j)], pred.ef[static_cast<std::size_t>(j)]);
        scan("f" + std::to_string(j + 1), u.f[static_cast<std::size_t>(j)], pred.ef[static_cast<std::size_t>(j)]);
    }
    return rep;
}

// ---- non-diagonal constraint fit ----

struct CFit {
    std::vector<int> indices;      ///< paired a (0-based)
    std::vector<cplx> p;           ///< fitted c_a c_abar
    double residual_train = 0.0;   ///< relative reflection residual on the fitting samples
    double residual_holdout = 0.0; ///< same p on held-out samples
    double spread = 0.0;           ///< relative difference to the fit on the held-out samples
    int free_directions = 0;       ///< rank deficiency of the Jacobian at the solution
    bool consistent = false;
    std::string message;
};

namespace detail {

inline Vec nondiag_residual_vector(const Grading& g, NonDiagBoundary b, const std::vector<int>& idx,
                                   const std::vector<cplx>& p, const QParams& qp,
                                   const std::vector<std::pair<cplx, cplx>>& samples, double* scale = nullptr) {
    for (std::size_t i = 0; i < idx.size(); ++i) b.c[idx[i]] = p[i];
    std::vector<Vec> parts;
    Eigen::Index total = 0;
    double sc = 1.0;
    for (const auto& [l1, l2] : samples) {
        const Mat k1 = K_nondiag(g, b, l1, qp), k2 = K_nondiag(g, b, l2, qp);
        const Mat a = R_trig(g, l1 - l2, qp), bs = R_trig(g, l1 + l2, qp);
        const Mat lhs = place(g, a, {0, 1}, 2) * place(g, k1, {0}, 2) * swap21(g, bs) * place(g, k2, {1}, 2);
        const Mat rhs = place(g, k2, {1}, 2) * bs * place(g, k1, {0}, 2) * swap21(g, a);
        sc = std::max(sc, max_abs(lhs));
        const Mat diff = lhs - rhs;
        parts.push_back(Eigen::Map<const Vec>(diff.data(), diff.size()));
        total += diff.size();
    }
    Vec out(total);
    Eigen::Index off = 0;
    for (const auto& v : parts) {
        out.segment(off, v.size()) = v;
        off += v.size();
    }
    if (scale) *scale = sc;
    return out;
}

struct GaussNewtonFit {
    std::vector<cplx> p;
    double residual = 0.0;
    int rank = 0;
};

/// Gauss-Newton on the quadratic residual r(p); central differences are exact here.
inline GaussNewtonFit fit_products(const Grading& g, const NonDiagBoundary& b, const std::vector<int>& idx,
                                   const QParams& qp, const std::vector<std::pair<cplx, cplx>>& samples) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    std::vector<cplx> p(idx.size(), cplx(1.0));
    GaussNewtonFit fit;
    double scale = 1.0;
    for (int it = 0; it < 40; ++it) {
        const Vec r = nondiag_residual_vector(g, b, idx, p, qp, samples, &scale);
        Mat jac(r.size(), n);
        for (Eigen::Index k = 0; k < n; ++k) {
            auto pp = p, pm = p;
            pp[static_cast<std::size_t>(k)] += 1.0;
            pm[static_cast<std::size_t>(k)] -= 1.0;
            jac.col(k) = (nondiag_residual_vector(g, b, idx, pp, qp, samples) -
                          nondiag_residual_vector(g, b, idx, pm, qp, samples)) / 2.0;
        }
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(jac);
        cod.setThreshold(1e-10);
        fit.rank = static_cast<int>(cod.rank());
        const Vec step = cod.solve(-r);
        for (Eigen::Index k = 0; k < n; ++k) p[static_cast<std::size_t>(k)] += step(k);
        if (step.cwiseAbs().maxCoeff() < 1e-14) break;
    }
    fit.p = p;
    fit.residual = nondiag_residual_vector(g, b, idx, p, qp, samples, &scale).cwiseAbs().maxCoeff() / scale;
    return fit;
}

}  // namespace detail

/// Fits p_a = c_a c_abar (c_abar = 1) so that the trig reflection equation holds,
/// then cross-validates on held-out samples.
inline CFit solve_c_constraint(const Grading& g, const NonDiagBoundary& b, const QParams& qp,
                               const std::vector<std::pair<cplx, cplx>>& train,
                               const std::vector<std::pair<cplx, cplx>>& holdout, double tol = 1e-8) {
    CFit out;
    for (const auto& [a, ab] : nondiag_pairs(g, b)) out.indices.push_back(a);
    const auto fit = detail::fit_products(g, b, out.indices, qp, train);
    out.p = fit.p;
    out.residual_train = fit.residual;
    out.free_directions = static_cast<int>(out.indices.size()) - fit.rank;
    double scale = 1.0;
    out.residual_holdout =
        detail::nondiag_residual_vector(g, b, out.indices, fit.p, qp, holdout, &scale).cwiseAbs().maxCoeff() / scale;
    const auto fit2 = detail::fit_products(g, b, out.indices, qp, holdout);
    for (std::size_t i = 0; i < fit.p.size(); ++i)
        out.spread = std::max(out.spread, std::abs(fit.p[i] - fit2.p[i]) / std::max(1.0, std::abs(fit.p[i])));
    out.consistent = out.residual_train < tol && out.residual_holdout < tol;
    out.message = out.consistent ? "consistent" : "family inconsistent at these parameters";
    return out;
}

inline NonDiagBoundary with_products(NonDiagBoundary b, const CFit& fit) {
    for (std::size_t i = 0; i < fit.indices.size(); ++i) b.c[fit.indices[i]] = fit.p[i];
    return b;
}

// ---- q-twisted Yangian ----

/// V = sum_i f_i e_{i, ibar} with f_i = sqrt(M_{ibar ibar}), so that V^T V = M.
inline Mat twist_V_q(const Grading& g, const QParams& qp) {
    if (g.scheme() != Scheme::symmetric) throw std::invalid_argument("q-twisted objects need the symmetric grading");
    const Mat m = M_matrix(g, qp);
    const int d = g.dim();
    Mat v = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) v(i, d - 1 - i) = std::sqrt(m(d - 1 - i, d - 1 - i));
    return v;
}

inline Mat q_transpose(const Grading& g, const Mat& a, int space, const QParams& qp) {
    const Mat v = twist_V_q(g, qp);
    return partial_transpose(g, a, space, &v);
}

/// Rbar12(l) = R21^{t1}(-l - i rho), Rbar21(l) = R12^{t2}(-l - i rho).
inline Mat Rbar12_q(const Grading& g, cplx lambda, const QParams& qp) {
    return q_transpose(g, swap21(g, R_trig(g, -lambda - I_c * g.rho(), qp)), 0, qp);
}
inline Mat Rbar21_q(const Grading& g, cplx lambda, const QParams& qp) {
    return q_transpose(g, R_trig(g, -lambda - I_c * g.rho(), qp), 1, qp);
}

inline double q_twisted_equation_residual(const Grading& g, const QParams& qp, const Mat& k, cplx l1, cplx l2) {
    const Mat r = R_trig(g, l1 - l2, qp);
    return exchange_residual(g, r, k, Rbar21_q(g, l1 + l2, qp), k, k, Rbar12_q(g, l1 + l2, qp), k, swap21(g, r));
}

/// Tbar(lambda) = T(lambda) K T^{t_0}(-lambda - i rho).
inline Mat q_twisted_double_row(const Grading& g, cplx lambda, const QParams& qp, int sites, const Mat& k) {
    const Mat hat = q_transpose(g, monodromy_trig(g, -lambda - I_c * g.rho(), qp, sites), 0, qp);
    return monodromy_trig(g, lambda, qp, sites) * place(g, k, {0}, sites + 1) * hat;
}

struct QTwistedReport {
    double vtv_residual = 0.0;       ///< |V^T V - M|
    double equation_residual = 0.0;  ///< q-twisted equation, K = 1, max over samples
    double exchange_plus = 0.0;      ///< R+ TT+ Rbar+ TT+ = TT+ Rbar+ TT+ R+
    double exchange_minus = 0.0;
    double max_charge_commutator = 0.0;  ///< max_ab |[TT+-_ab, t(lambda)]|
};

/// Asymptotic charges TT+ = T+ K (T-)^{t_0}, TT- = T- K (T+)^{t_0}, the limits of T K T^{t_0}(-lambda - i rho).
inline TrigCharges q_twisted_charges(const Grading& g, const QParams& qp, int sites, const LpmIdentification& lpm,
                                     const Mat& k) {
    const Mat tp = monodromy_of(g, lpm.Lp, sites);
    const Mat tm = monodromy_of(g, lpm.Lm, sites);
    const Mat kk = place(g, k, {0}, sites + 1);
    return {tp * kk * q_transpose(g, tm, 0, qp), tm * kk * q_transpose(g, tp, 0, qp)};
}

inline QTwistedReport q_twisted(const Grading& g, const QParams& qp, int sites,
                                const std::vector<std::pair<cplx, cplx>>& samples) {
    QTwistedReport rep;
    const Mat v = twist_V_q(g, qp);
    rep.vtv_residual = max_abs(transpose_T(g, v) * v - M_matrix(g, qp));
    const Mat id = Mat::Identity(g.dim(), g.dim());
    for (const auto& [l1, l2] : samples)
        rep.equation_residual = std::max(rep.equation_residual, q_twisted_equation_residual(g, qp, id, l1, l2));
    const auto lpm = select_L_pm(g, qp);
    const RPair r = R_pm(g, qp);
    const TrigCharges c = q_twisted_charges(g, qp, sites, lpm, id);
    // limits of Rbar21(l) = R12^{t2}(-l - i rho) and Rbar12 at l -> +inf (built from R-) and -inf (from R+)
    const Mat rb21p = q_transpose(g, r.minus, 1, qp), rb12p = q_transpose(g, swap21(g, r.minus), 0, qp);
    const Mat rb21m = q_transpose(g, r.plus, 1, qp), rb12m = q_transpose(g, swap21(g, r.plus), 0, qp);
    rep.exchange_plus = exchange_residual(g, r.plus, c.plus, rb21p, c.plus, c.plus, rb12p, c.plus, swap21(g, r.plus));
    rep.exchange_minus =
        exchange_residual(g, r.minus, c.minus, rb21m, c.minus, c.minus, rb12m, c.minus, swap21(g, r.minus));
    for (const auto& [l1, l2] : samples) {
        const Mat t = partial_super_trace_aux(g, q_twisted_double_row(g, l1, qp, sites, id));
        for (const Mat* x : {&c.plus, &c.minus})
            for (int a = 0; a < g.dim(); ++a)
                for (int b = 0; b < g.dim(); ++b)
                    rep.max_charge_commutator = std::max(rep.max_charge_commutator, rel_commutator(aux_component(g, *x, a, b), t));
    }
    return rep;
}

}  // namespace superbound
