#include <gtest/gtest.h>

#include "qkz/rmatrix.hpp"

using namespace qkz;

namespace {

const cplx kappa = I * pi / cplx(-3.3, 0.0);

Params desk(int n, int l)
{
    Params P;
    P.n = n;
    P.l = l;
    P.p = -3.0;
    P.mu = {0.5, 1.0};
    CVec z{{0.2, 0.1}, {-0.3, -0.4}, {0.1, 0.6}}, la{{-0.8, 0.3}, {-1.1, -0.2}, {-0.9, 0.1}};
    P.z.assign(z.begin(), z.begin() + n);
    P.lambda.assign(la.begin(), la.begin() + n);
    return P;
}

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(b.norm(), 1.0); }

} // namespace

TEST(RationalR, Unitarity)
{
    ModuleSpec a{cplx(0.3, 0.4)}, b{cplx(-0.6, 0.25)};
    for (int l = 0; l <= 4; ++l)
        for (cplx x : {cplx(0.37, 0.2), cplx(-1.3, 0.8)}) {
            Matrix R = rational_r(a, b, l, x), Rm = rational_r(a, b, l, -x);
            EXPECT_LT(rel(R * Rm, Matrix::Identity(l + 1, l + 1)), 1e-12);
        }
}

TEST(RationalR, CommutesWithE)
{
    ModuleSpec a{cplx(0.3, 0.4)}, b{cplx(-0.6, 0.25)};
    const cplx x(0.37, 0.2);
    for (int l = 1; l <= 4; ++l) {
        Matrix E = act_e(WeightBasis({a, b}, l)).M;
        EXPECT_LT(rel(rational_r(a, b, l - 1, x) * E, E * rational_r(a, b, l, x)), 1e-11) << l;
    }
}

TEST(TrigR, ApproachesIdentityForSmallX)
{
    // every summand tends to R^q(0) times the projector sum, i.e. R^q(0), as x -> 0
    ModuleSpec a{cplx(0.3, 0.4)}, b{cplx(-0.6, 0.25)};
    for (int l = 1; l <= 3; ++l) {
        Matrix R0 = trig_r(a, b, l, 0.0, kappa), Rs = trig_r(a, b, l, 1e-9, kappa);
        EXPECT_LT(rel(Rs, R0), 1e-7) << l;
    }
}

TEST(RationalR, YangBaxter)
{
    WeightBasis B(verma_specs({cplx(0.3, 0.4), cplx(-0.6, 0.25), cplx(1.1, 0.5)}), 2);
    const cplx x1(0.4, 0.1), x2(-0.3, 0.7), x3(1.2, -0.2);
    Matrix lhs = embed_rational(0, 1, x1 - x2, B) * embed_rational(0, 2, x1 - x3, B) * embed_rational(1, 2, x2 - x3, B);
    Matrix rhs = embed_rational(1, 2, x2 - x3, B) * embed_rational(0, 2, x1 - x3, B) * embed_rational(0, 1, x1 - x2, B);
    EXPECT_LT(rel(lhs, rhs), 1e-11);
}

TEST(RMatrix, FactorizationRejectsForeignOperator)
{
    ModuleSpec l1{0.5, ModuleKind::irreducible}, v2{cplx(-0.7, 0.35)};
    Matrix M = Matrix::Ones(3, 3);
    EXPECT_THROW(factor_to_irreducible(M, {l1, v2}, 2), Error);
}

TEST(Qkz, FlatnessOnDesk)
{
    for (int n = 2; n <= 3; ++n)
        for (int l = 1; l <= 2; ++l) {
            Params P = desk(n, l);
            EXPECT_LT(check_compatibility(P, verma_specs(P.lambda)), 1e-12) << n << " " << l;
        }
}

TEST(Qkz, SingleFactorIsDiagonal)
{
    Params P = desk(1, 2);
    Matrix K = qkz_operator(0, P, verma_specs(P.lambda));
    ASSERT_EQ(K.rows(), 1);
    EXPECT_LT(std::abs(K(0, 0) - std::exp(-P.mu * (P.lambda[0] - 2.0))), 1e-14);
}

TEST(Transitions, MatchRMatrix)
{
    for (int l = 1; l <= 2; ++l) {
        Params P = desk(2, l);
        for (auto sigma : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
            auto t = transition_matrix(sigma, 0, P, verma_specs(P.lambda));
            EXPECT_LT(t.rel_err, 1e-9) << l;
            EXPECT_LT(t.residual, 1e-9) << l;
        }
    }
    EXPECT_THROW(transition_matrix({0, 1}, 1, desk(2, 1), verma_specs(desk(2, 1).lambda)), Error);
}
