#include "oracles.hpp"
#include "superbound/graded_core.hpp"
#include "superbound/sampling.hpp"

#include <gtest/gtest.h>

using namespace superbound;

namespace {

std::vector<Grading> small_gradings() {
    return {make_grading(1, 1, Scheme::distinguished), make_grading(2, 1, Scheme::distinguished),
            make_grading(1, 2, Scheme::distinguished), make_grading(1, 2, Scheme::symmetric)};
}

Mat random_matrix(Sampler& s, Eigen::Index n) {
    Mat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx(s.uniform(-1, 1), s.uniform(-1, 1));
    return a;
}

/// Keeps only the entries of the given parity.
Mat homogeneous_part(const Grading& g, const Mat& a, int parity) {
    const int s = num_spaces(g, a);
    Mat out = a;
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            if (((index_parity(g, s, r) + index_parity(g, s, c)) & 1) != parity) out(r, c) = 0.0;
    return out;
}

int unit_parity(const Grading& g, int i, int j) { return (g.parity(i) + g.parity(j)) & 1; }

}  // namespace

TEST(Grading, DistinguishedParities) {
    EXPECT_EQ(make_grading(2, 1, Scheme::distinguished).parities(), (std::vector<int>{0, 0, 1}));
    EXPECT_EQ(make_grading(3, 0, Scheme::distinguished).parities(), (std::vector<int>{0, 0, 0}));
    EXPECT_EQ(make_grading(2, 2, Scheme::distinguished).parities(), (std::vector<int>{0, 0, 1, 1}));
}

TEST(Grading, SymmetricParities) {
    EXPECT_EQ(make_grading(1, 2, Scheme::symmetric).parities(), (std::vector<int>{0, 1, 0}));
    EXPECT_EQ(make_grading(2, 2, Scheme::symmetric).parities(), (std::vector<int>{0, 1, 1, 0}));
    EXPECT_EQ(make_grading(2, 4, Scheme::symmetric).parities(), oracle::parities(2, 4, true));
}

TEST(Grading, RejectsBadInput) {
    try {
        make_grading(1, 1, Scheme::symmetric);
        FAIL() << "odd n accepted";
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "symmetric grading requires n = 2k");
    }
    EXPECT_THROW(make_grading(0, 0, Scheme::distinguished), std::invalid_argument);
    EXPECT_THROW(make_grading(-1, 2, Scheme::distinguished), std::invalid_argument);
}

TEST(Grading, Rho) {
    EXPECT_DOUBLE_EQ(make_grading(2, 1, Scheme::distinguished).rho(), -0.5);
    EXPECT_DOUBLE_EQ(make_grading(1, 2, Scheme::symmetric).rho(), 0.5);
    EXPECT_DOUBLE_EQ(make_grading(2, 2, Scheme::distinguished).rho(), 0.0);
}

TEST(TensorEmbed, BosonicUnitsHavePlusSign) {
    const Grading g = make_grading(1, 1, Scheme::distinguished);
    const Mat e = tensor_embed(g, unit(g, 0, 0), unit(g, 0, 0));
    EXPECT_EQ(e(0, 0), cplx(1.0));
    EXPECT_EQ(max_abs(e), 1.0);
    EXPECT_EQ(e.cwiseAbs().sum(), 1.0);
}

TEST(TensorEmbed, OddUnitsPickUpSign) {
    // e12 (x) e21: row (1,2), col (2,1), sign (-1)^{[2]([1]+[2])} = -1
    const Grading g = make_grading(1, 1, Scheme::distinguished);
    const Mat e = tensor_embed(g, unit(g, 0, 1), unit(g, 1, 0));
    EXPECT_EQ(e(0 * 2 + 1, 1 * 2 + 0), cplx(-1.0));
    EXPECT_EQ(e.cwiseAbs().sum(), 1.0);
}

TEST(TensorEmbed, MatchesEntrywiseOracle) {
    Sampler s(7);
    for (const auto& g : small_gradings()) {
        const Mat a = random_matrix(s, g.dim()), b = random_matrix(s, g.dim() * g.dim());
        const Mat ref = oracle::kron(g.parities(), {a, Mat::Identity(g.dim(), g.dim()), Mat::Identity(g.dim(), g.dim())}) *
                        oracle::place2(g.parities(), b, 1, 2, 3);
        EXPECT_LT(max_abs(tensor_embed(g, a, b) - ref), 1e-13);
    }
}

TEST(TensorEmbed, HomomorphismOnAllUnitPairs) {
    // (u (x) v)(w (x) x) = (-1)^{[v][w]} (uw) (x) (vx), exactly
    for (const auto& g : {make_grading(1, 1, Scheme::distinguished), make_grading(2, 1, Scheme::distinguished)}) {
        const int d = g.dim();
        for (int a = 0; a < d * d * d * d; ++a)
            for (int b = 0; b < d * d * d * d; ++b) {
                const int u0 = a / (d * d * d), u1 = (a / (d * d)) % d, v0 = (a / d) % d, v1 = a % d;
                const int w0 = b / (d * d * d), w1 = (b / (d * d)) % d, x0 = (b / d) % d, x1 = b % d;
                const Mat lhs = tensor_embed(g, unit(g, u0, u1), unit(g, v0, v1)) *
                                tensor_embed(g, unit(g, w0, w1), unit(g, x0, x1));
                const double sg = (unit_parity(g, v0, v1) * unit_parity(g, w0, w1)) ? -1.0 : 1.0;
                const Mat rhs = sg * tensor_embed(g, unit(g, u0, u1) * unit(g, w0, w1), unit(g, v0, v1) * unit(g, x0, x1));
                ASSERT_EQ(max_abs(lhs - rhs), 0.0) << a << "," << b;
            }
    }
}

TEST(Place, AgreesWithOracleOnNonAdjacentSpaces) {
    Sampler s(11);
    for (const auto& g : small_gradings()) {
        const Mat x = random_matrix(s, g.dim() * g.dim());
        EXPECT_LT(max_abs(place(g, x, {0, 2}, 3) - oracle::place2(g.parities(), x, 0, 2, 3)), 1e-13);
        EXPECT_LT(max_abs(place(g, x, {1, 3}, 4) - oracle::place2(g.parities(), x, 1, 3, 4)), 1e-13);
    }
}

TEST(Place, ReversedOrderIsConjugationByP) {
    Sampler s(12);
    for (const auto& g : small_gradings()) {
        const Mat x = random_matrix(s, g.dim() * g.dim());
        const Mat p = oracle::permutation(g.parities());
        EXPECT_LT(max_abs(place(g, x, {1, 0}, 2) - p * x * p), 1e-13);
    }
}

TEST(SuperTrace, Identities) {
    const Grading g11 = make_grading(1, 1, Scheme::distinguished), g21 = make_grading(2, 1, Scheme::distinguished);
    EXPECT_EQ(super_trace(g11, identity(g11, 1)), cplx(0.0));
    EXPECT_EQ(super_trace(g21, identity(g21, 1)), cplx(1.0));
    EXPECT_EQ(super_trace(g21, identity(g21, 2)), cplx(1.0));
    EXPECT_EQ(super_trace(make_grading(2, 2, Scheme::distinguished), identity(make_grading(2, 2, Scheme::distinguished), 3)),
              cplx(0.0));
}

TEST(SuperTrace, MatchesOracleAndVanishesOnSuperCommutators) {
    Sampler s(3);
    for (const auto& g : small_gradings()) {
        for (int k = 0; k < 25; ++k) {
            const Mat a = homogeneous_part(g, random_matrix(s, g.dim() * g.dim()), k % 2);
            const Mat b = homogeneous_part(g, random_matrix(s, g.dim() * g.dim()), (k / 2) % 2);
            EXPECT_LT(std::abs(super_trace(g, a) - oracle::str(g.parities(), a)), 1e-13);
            EXPECT_LT(std::abs(super_trace(g, super_commutator(g, a, b))), 1e-12);
        }
    }
}

TEST(PartialSuperTrace, FactorisedOperator) {
    Sampler s(5);
    for (const auto& g : small_gradings()) {
        const Mat x = random_matrix(s, g.dim());
        const Mat y = random_matrix(s, g.dim());
        EXPECT_EQ(max_abs(partial_super_trace_aux(g, tensor_embed(g, x, identity(g, 1))) -
                          super_trace(g, x) * identity(g, 1)),
                  0.0);
        // only the bosonic aux index survives
        EXPECT_LT(max_abs(partial_super_trace_aux(g, tensor_embed(g, unit(g, 0, 0), y)) - y), 1e-15);
    }
}

TEST(PartialSuperTrace, OfPermutationIsIdentity) {
    // sum_a (-1)^{[a]} P_{(a,r),(a,c)} with P_{(a,a),(a,a)} = (-1)^{[a]}
    for (const auto& g : small_gradings()) {
        const Mat p = oracle::permutation(g.parities());
        EXPECT_LT(max_abs(partial_super_trace_aux(g, p) - oracle::ptrace0(g.parities(), p)), 1e-15);
        EXPECT_LT(max_abs(partial_super_trace_aux(g, p) - identity(g, 1)), 1e-15);
    }
}

TEST(PartialSuperTrace, RejectsSingleSpace) {
    const Grading g = make_grading(1, 1, Scheme::distinguished);
    EXPECT_THROW(partial_super_trace_aux(g, identity(g, 1)), std::invalid_argument);
}

TEST(Transpose, UnitExamples) {
    const Grading g = make_grading(1, 1, Scheme::distinguished);
    EXPECT_EQ(max_abs(transpose_T(g, unit(g, 0, 1)) + unit(g, 1, 0)), 0.0);
    EXPECT_EQ(max_abs(transpose_T(g, unit(g, 0, 0)) - unit(g, 0, 0)), 0.0);
    EXPECT_EQ(max_abs(transpose_T(g, unit(g, 1, 0)) - unit(g, 0, 1)), 0.0);
}

TEST(Transpose, DoubleTransposeSignPattern) {
    Sampler s(9);
    for (const auto& g : small_gradings()) {
        const Mat a = random_matrix(s, g.dim());
        const Mat tt = transpose_T(g, transpose_T(g, a));
        for (int i = 0; i < g.dim(); ++i)
            for (int j = 0; j < g.dim(); ++j)
                EXPECT_LT(std::abs(tt(i, j) - ((g.parity(i) + g.parity(j)) % 2 ? -1.0 : 1.0) * a(i, j)), 1e-15);
        const Mat even = homogeneous_part(g, a, 0);
        EXPECT_LT(max_abs(transpose_T(g, transpose_T(g, even)) - even), 1e-15);
    }
}

TEST(Transpose, AntiHomomorphismOnUnits) {
    const Grading g = make_grading(1, 1, Scheme::distinguished);
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b) {
            const Mat x = unit(g, a / 4 % 2, a % 2) * (a / 8 ? 2.0 : 1.0);
            const Mat y = unit(g, b / 4 % 2, b % 2);
            const int px = unit_parity(g, a / 4 % 2, a % 2), py = unit_parity(g, b / 4 % 2, b % 2);
            EXPECT_EQ(max_abs(transpose_T(g, x * y) - ((px * py) ? -1.0 : 1.0) * transpose_T(g, y) * transpose_T(g, x)), 0.0);
        }
}

TEST(PartialTranspose, BosonicIsOrdinary) {
    const Grading g = make_grading(2, 0, Scheme::distinguished);
    const Mat p = oracle::permutation(g.parities());
    Mat ref = Mat::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) ref(c * 2 + b, a * 2 + d) = p(a * 2 + b, c * 2 + d);
    EXPECT_EQ(max_abs(partial_transpose(g, p, 0) - ref), 0.0);
}

TEST(PartialTranspose, BothSpacesOfAProduct) {
    const Grading g = make_grading(1, 1, Scheme::distinguished);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const Mat x = unit(g, a / 2, a % 2), y = unit(g, b / 2, b % 2);
            const Mat both = partial_transpose(g, partial_transpose(g, tensor_embed(g, x, y), 0), 1);
            const Mat ref = tensor_embed(g, transpose_T(g, x), transpose_T(g, y));
            EXPECT_EQ(max_abs(both - ref), 0.0) << a << "," << b;
        }
}

TEST(PartialTranspose, SingleSpaceMatchesTransposeT) {
    Sampler s(13);
    for (const auto& g : small_gradings()) {
        const Mat a = random_matrix(s, g.dim());
        EXPECT_LT(max_abs(partial_transpose(g, a, 0) - transpose_T(g, a)), 1e-15);
    }
}

TEST(PartialTranspose, WithVConjugates) {
    const Grading g = make_grading(1, 2, Scheme::symmetric);
    Mat v = Mat::Zero(3, 3);
    v(0, 2) = 1.0;
    v(1, 1) = 1.0;
    v(2, 0) = -1.0;
    Sampler s(17);
    const Mat a = random_matrix(s, 3);
    EXPECT_LT(max_abs(partial_transpose(g, a, 0, &v) - v.inverse() * transpose_T(g, a) * v), 1e-15);
    EXPECT_THROW(partial_transpose(g, a, 1), std::invalid_argument);
}

TEST(SuperCommutator, UnitExamples) {
    const Grading g = make_grading(1, 1, Scheme::distinguished);
    EXPECT_EQ(max_abs(super_commutator(g, unit(g, 0, 0), unit(g, 0, 1)) - unit(g, 0, 1)), 0.0);
    EXPECT_EQ(max_abs(super_commutator(g, unit(g, 0, 1), unit(g, 1, 0)) - identity(g, 1)), 0.0);
    const Mat odd = unit(g, 0, 1) + 2.0 * unit(g, 1, 0);
    EXPECT_EQ(max_abs(super_commutator(g, odd, odd) - 2.0 * odd * odd), 0.0);
}

TEST(SuperCommutator, RejectsMixedParity) {
    const Grading g = make_grading(1, 1, Scheme::distinguished);
    const Mat mixed = unit(g, 0, 0) + unit(g, 0, 1);
    EXPECT_EQ(operator_parity(g, mixed), Parity::mixed);
    EXPECT_THROW(super_commutator(g, mixed, unit(g, 0, 0)), std::invalid_argument);
}

TEST(AuxComponent, InvertsTheExpansion) {
    Sampler s(21);
    for (const auto& g : small_gradings()) {
        const Mat x = random_matrix(s, g.dim() * g.dim() * g.dim());
        Mat rebuilt = Mat::Zero(x.rows(), x.cols());
        for (int a = 0; a < g.dim(); ++a)
            for (int b = 0; b < g.dim(); ++b) rebuilt += tensor_embed(g, unit(g, a, b), aux_component(g, x, a, b));
        EXPECT_LT(max_abs(rebuilt - x), 1e-14);
    }
}
