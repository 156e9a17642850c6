#include "oracles.hpp"
#include "superbound/sampling.hpp"
#include "superbound/verification.hpp"
#include "superbound/yangian_rational.hpp"

#include <gtest/gtest.h>

using namespace superbound;

namespace {

std::vector<Grading> four_algebras() {
    return {Grading(1, 1, Scheme::distinguished), Grading(2, 1, Scheme::distinguished),
            Grading(1, 2, Scheme::distinguished), Grading(2, 2, Scheme::distinguished)};
}

Mat oracle_R(const Grading& g, cplx l) {
    const int d = g.dim();
    return l * Mat::Identity(d * d, d * d) + cplx(0, 1) * oracle::permutation(g.parities());
}

/// L_{0N} ... L_{01} assembled from the oracle placements.
Mat oracle_monodromy(const Grading& g, cplx l, int sites) {
    const Mat r = oracle_R(g, l);
    Mat t = Mat::Identity(oracle::dpow(g.dim(), sites + 1), oracle::dpow(g.dim(), sites + 1));
    for (int s = sites; s >= 1; --s) t = t * oracle::place2(g.parities(), r, 0, s, sites + 1);
    return t;
}

/// Q_{(c,b),(a,d)} = (-1)^{[a][c]+[c]} P_{(a,b),(c,d)}, then V-conjugated on space 0 when symmetric.
Mat oracle_Q(const Grading& g) {
    const auto& par = g.parities();
    const int d = g.dim();
    const Mat p = oracle::permutation(par);
    Mat q = Mat::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    const int sg = par[static_cast<std::size_t>(a)] * par[static_cast<std::size_t>(c)] + par[static_cast<std::size_t>(c)];
                    q(c * d + b, a * d + e) = (sg % 2 ? -1.0 : 1.0) * p(a * d + b, c * d + e);
                }
    if (g.scheme() == Scheme::symmetric) {
        Mat v = Mat::Zero(d, d);
        for (int i = 0; i < d; ++i) v(i, d - 1 - i) = i < g.m() + g.k() ? 1.0 : -1.0;
        q = oracle::place1(par, v.inverse(), 0, 2) * q * oracle::place1(par, v, 0, 2);
    }
    return q;
}

double ybe_residual(const Grading& g, cplx l1, cplx l2) {
    const auto& par = g.parities();
    const Mat r12 = oracle::place2(par, oracle_R(g, l1 - l2), 0, 1, 3);
    const Mat r13 = oracle::place2(par, oracle_R(g, l1), 0, 2, 3);
    const Mat r23 = oracle::place2(par, oracle_R(g, l2), 1, 2, 3);
    return max_abs(r12 * r13 * r23 - r23 * r13 * r12);
}

}  // namespace

TEST(Permutation, Gl11Entries) {
    const Grading g(1, 1, Scheme::distinguished);
    Mat ref = Mat::Zero(4, 4);
    ref(0, 0) = 1.0;   // (1,1),(1,1)
    ref(1, 2) = 1.0;   // (1,2),(2,1)
    ref(2, 1) = 1.0;   // (2,1),(1,2)
    ref(3, 3) = -1.0;  // (2,2),(2,2)
    EXPECT_EQ(max_abs(permutation_P(g) - ref), 0.0);
}

TEST(Permutation, MatchesBasisAction) {
    for (const auto& g : four_algebras()) EXPECT_EQ(max_abs(permutation_P(g) - oracle::permutation(g.parities())), 0.0);
    const Grading sym(1, 2, Scheme::symmetric);
    EXPECT_EQ(max_abs(permutation_P(sym) - oracle::permutation(sym.parities())), 0.0);
}

TEST(Permutation, SquaresToIdentity) {
    for (const auto& g : four_algebras()) EXPECT_EQ(max_abs(permutation_P(g) * permutation_P(g) - identity(g, 2)), 0.0);
}

TEST(Permutation, BosonicIsOrdinarySwap) {
    const Grading g(2, 0, Scheme::distinguished);
    Mat swap = Mat::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) swap(b * 2 + a, a * 2 + b) = 1.0;
    EXPECT_EQ(max_abs(permutation_P(g) - swap), 0.0);
}

TEST(RRational, AtZeroIsIP) {
    const Grading g(2, 1, Scheme::distinguished);
    EXPECT_EQ(max_abs(R_rational(g, 0.0) - I_c * permutation_P(g)), 0.0);
}

TEST(RRational, Unitarity) {
    Sampler s(101);
    for (const auto& g : four_algebras())
        for (int k = 0; k < 10; ++k) {
            const cplx l = s.point(2.0, rational_exclusions());
            EXPECT_LT(max_abs(R_rational(g, l) * R_rational(g, -l) + (l * l + 1.0) * identity(g, 2)), 1e-13);
        }
}

TEST(RRational, YbeAtFixedPoint) {
    const Grading g(2, 1, Scheme::distinguished);
    EXPECT_LT(ybe_residual(g, {0.7, 0.3}, {-1.1, 0.2}), 1e-12);
}

TEST(RRational, YbeOnSeededSamples) {
    Sampler s(default_seed());
    for (const auto& g : four_algebras())
        for (const auto& [l1, l2] : s.pairs(20, 2.0, rational_exclusions())) {
            const Mat r = R_rational(g, l1 - l2);
            const double res = exchange_residual(g, r, R_rational(g, l1), identity(g, 2), R_rational(g, l2),
                                                 R_rational(g, l2), identity(g, 2), R_rational(g, l1), r);
            EXPECT_LT(res, 1e-11);
        }
}

TEST(RRational, OracleYbeDetectsAWrongSign) {
    // negative control: one wrong sign in P breaks the equation
    const Grading g(1, 1, Scheme::distinguished);
    const auto& par = g.parities();
    Mat bad = oracle::permutation(par);
    bad(3, 3) = 1.0;
    auto rb = [&](cplx l) { return Mat(l * Mat::Identity(4, 4) + cplx(0, 1) * bad); };
    const cplx l1(0.7, 0.3), l2(-1.1, 0.2);
    const Mat lhs = oracle::place2(par, rb(l1 - l2), 0, 1, 3) * oracle::place2(par, rb(l1), 0, 2, 3) *
                    oracle::place2(par, rb(l2), 1, 2, 3);
    const Mat rhs = oracle::place2(par, rb(l2), 1, 2, 3) * oracle::place2(par, rb(l1), 0, 2, 3) *
                    oracle::place2(par, rb(l1 - l2), 0, 1, 3);
    EXPECT_GT(max_abs(lhs - rhs), 1e-2);
}

TEST(ProjectorQ, MatchesEntrywiseTranspose) {
    for (const auto& g : four_algebras()) EXPECT_EQ(max_abs(projector_Q(g) - oracle_Q(g)), 0.0);
    for (const auto& g : {Grading(1, 2, Scheme::symmetric), Grading(2, 2, Scheme::symmetric)})
        EXPECT_LT(max_abs(projector_Q(g) - oracle_Q(g)), 1e-15);
}

TEST(ProjectorQ, SymmetricGradingIdentities) {
    // with the V-twisted transpose: Q^2 = 2 rho Q and PQ = QP = -Q
    for (const auto& g : {Grading(1, 2, Scheme::symmetric), Grading(2, 2, Scheme::symmetric)}) {
        const Mat q = projector_Q(g), p = permutation_P(g);
        EXPECT_LT(max_abs(q * q - 2.0 * g.rho() * q), 1e-12);
        EXPECT_LT(max_abs(p * q + q), 1e-12);
        EXPECT_LT(max_abs(q * p + q), 1e-12);
    }
}

TEST(ProjectorQ, DistinguishedGradingSquare) {
    // plain transpose: Q^2 = str(1) Q = -2 rho Q
    for (const auto& g : four_algebras()) {
        const Mat q = projector_Q(g);
        EXPECT_LT(max_abs(q * q - super_trace(g, identity(g, 1)) * q), 1e-12);
    }
    const Grading g11(1, 1, Scheme::distinguished);
    EXPECT_EQ(max_abs(projector_Q(g11) * projector_Q(g11)), 0.0);
}

TEST(ProjectorQ, StatedProjectorRelationsDoNotHold) {
    // PQ = QP = Q as written fails for every algebra; Q^2 = 2 rho Q fails when rho != 0 in the distinguished grading
    for (const auto& g : four_algebras()) {
        const Mat q = projector_Q(g), p = permutation_P(g);
        EXPECT_GT(max_abs(p * q - q), 0.5);
        if (g.rho() != 0.0) EXPECT_GT(max_abs(q * q - 2.0 * g.rho() * q), 0.5);
    }
}

TEST(ProjectorQ, RbarForm) {
    for (const auto& g : four_algebras()) {
        const cplx l(0.4, -0.3);
        EXPECT_LT(max_abs(Rbar_rational(g, l) - ((-l - I_c * g.rho()) * identity(g, 2) + I_c * projector_Q(g))), 1e-15);
    }
}

TEST(Rho, HalfDifference) {
    for (const auto& g : four_algebras()) EXPECT_DOUBLE_EQ(g.rho(), 0.5 * (g.n() - g.m()));
}

TEST(Monodromy, SingleSiteIsR) {
    const Grading g(2, 1, Scheme::distinguished);
    EXPECT_EQ(max_abs(monodromy_T(g, {0.3, 0.4}, 1) - R_rational(g, {0.3, 0.4})), 0.0);
}

TEST(Monodromy, MatchesOracleProduct) {
    for (const auto& g : {Grading(1, 1, Scheme::distinguished), Grading(2, 1, Scheme::distinguished)})
        for (int sites = 1; sites <= 3; ++sites) {
            const cplx l(0.6, -0.2);
            EXPECT_LT(max_abs(monodromy_T(g, l, sites) - oracle_monodromy(g, l, sites)), 1e-12) << sites;
        }
}

TEST(Monodromy, NormalizationAndErrors) {
    const Grading g(1, 1, Scheme::distinguished);
    const cplx l(1.5, 0.5);
    EXPECT_LT(max_abs(monodromy_T(g, l, 2, true) * l * l - monodromy_T(g, l, 2)), 1e-13);
    EXPECT_THROW(monodromy_T(g, l, 0), std::invalid_argument);
    const Mat t = monodromy_T(g, l, 2);
    EXPECT_LT(max_abs(t * t.inverse() - identity(g, 3)), 1e-13);
}

TEST(Monodromy, RttUpToThreeSites) {
    Sampler s(default_seed());
    for (const auto& g : {Grading(1, 1, Scheme::distinguished), Grading(2, 1, Scheme::distinguished),
                          Grading(1, 2, Scheme::symmetric)})
        for (int sites = 1; sites <= 3; ++sites)
            for (const auto& [l1, l2] : s.pairs(3, 2.0, rational_exclusions())) {
                const Mat r = R_rational(g, l1 - l2);
                const Mat t1 = monodromy_T(g, l1, sites), t2 = monodromy_T(g, l2, sites);
                EXPECT_LT(exchange_residual(g, r, t1, identity(g, 2), t2, t2, identity(g, 2), t1, r), 1e-10) << sites;
            }
}

TEST(Coproduct, SingleSiteGenerators) {
    // read off P = sum e_ab (x) P_ab: P_ab = (-1)^{[b]} e_ba
    for (const auto& g : four_algebras()) {
        const auto gs = coproduct_generators(g, 1);
        for (int a = 0; a < g.dim(); ++a)
            for (int b = 0; b < g.dim(); ++b) {
                EXPECT_EQ(max_abs(gs.at({a, b}) - g.sgn(b) * oracle::unit(g.dim(), b, a)), 0.0);
                EXPECT_EQ(max_abs(gs.at({a, b}) - aux_component(g, permutation_P(g), a, b)), 0.0);
            }
    }
}

TEST(Coproduct, AgreesWithAuxComponentsOfTheMonodromy) {
    // lambda-linear part of T(lambda) for N sites is i sum_k P_0k
    const Grading g(2, 1, Scheme::distinguished);
    const int sites = 2;
    const Mat t = monodromy_T(g, 2.0, sites), tm = monodromy_T(g, -2.0, sites);
    // T(l) = l^2 + i l X + Y, so X = (T(2) - T(-2)) / (4 i)
    const Mat x = (t - tm) / (4.0 * I_c);
    const auto gs = coproduct_generators(g, sites);
    for (int a = 0; a < g.dim(); ++a)
        for (int b = 0; b < g.dim(); ++b) EXPECT_LT(max_abs(aux_component(g, x, a, b) - gs.at({a, b})), 1e-13);
}

TEST(Coproduct, OffDiagonalGeneratorsAreSupertraceless) {
    for (const auto& g : four_algebras())
        for (const auto& [ab, x] : coproduct_generators(g, 2))
            if (ab.first != ab.second) EXPECT_EQ(std::abs(super_trace(g, x)), 0.0);
}

TEST(Coproduct, DiagonalGeneratorsAreDiagonal) {
    const Grading g(1, 1, Scheme::distinguished);
    for (int a = 0; a < 2; ++a) {
        const Mat x = coproduct_generators(g, 2).at({a, a});
        EXPECT_EQ(max_abs(x - Mat(x.diagonal().asDiagonal())), 0.0);
    }
}

TEST(GlRelations, FundamentalIsExact) {
    for (const auto& g : four_algebras()) EXPECT_EQ(check_gl_relations(g, coproduct_generators(g, 1)).max_residual, 0.0);
}

TEST(GlRelations, ThreeSiteCoproduct) {
    const Grading g(1, 1, Scheme::distinguished);
    EXPECT_LT(check_gl_relations(g, coproduct_generators(g, 3)).max_residual, 1e-12);
    const Grading g21(2, 1, Scheme::distinguished);
    EXPECT_LT(check_gl_relations(g21, coproduct_generators(g21, 2)).max_residual, 1e-12);
}

TEST(GlRelations, DisjointIndicesCommute) {
    const Grading g(2, 2, Scheme::distinguished);
    const auto gs = coproduct_generators(g, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    if (k != j && i != l) EXPECT_EQ(max_abs(super_commutator(g, gs.at({i, j}), gs.at({k, l}))), 0.0);
}

TEST(GlRelations, DetectsBrokenGenerators) {
    const Grading g(2, 1, Scheme::distinguished);
    auto gs = coproduct_generators(g, 1);
    gs.at({0, 2}) *= 2.0;
    const auto rr = check_gl_relations(g, gs);
    EXPECT_GT(rr.max_residual, 0.5);
    EXPECT_FALSE(rr.worst.empty());
}

TEST(OppositeCoproduct, EqualsPiConjugation) {
    for (const auto& g : four_algebras()) {
        const auto direct = opposite_coproduct_direct(g);
        const auto conj = opposite_coproduct_generators(g);
        for (const auto& [ab, x] : direct) EXPECT_LT(max_abs(x - conj.at(ab)), 1e-13);
        const Mat pi = shift_Pi(g);
        const cplx l(0.3, 0.8);
        EXPECT_LT(max_abs(opposite_coproduct_L(g, l) - pi * coproduct_L(g, l) * pi), 1e-13);
    }
}

TEST(OppositeCoproduct, SatisfiesGlRelations) {
    const Grading g(2, 1, Scheme::distinguished);
    EXPECT_LT(check_gl_relations(g, opposite_coproduct_direct(g)).max_residual, 1e-12);
}
