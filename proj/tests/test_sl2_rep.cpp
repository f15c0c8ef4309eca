#include <gtest/gtest.h>

#include <random>

#include "qkz/sl2_rep.hpp"

using namespace qkz;

namespace {

const cplx kappa = I * pi / cplx(-3.3, 0.1);

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(b.norm(), 1.0); }

} // namespace

TEST(WeightBasis, Dimensions)
{
    EXPECT_EQ(WeightBasis(verma_specs({0.3, 0.7}), 3).dim(), 4);
    auto L = irreducible_specs({0.5, 0.5});
    EXPECT_EQ(WeightBasis(L, 1).dim(), 2);
    EXPECT_EQ(WeightBasis(L, 2).dim(), 1);
    EXPECT_EQ(WeightBasis(L, 3).dim(), 0);
    EXPECT_EQ(WeightBasis(irreducible_specs({cplx(0.5, 0.2)}), 4).dim(), 1);
}

TEST(WeightBasis, FindAndWeight)
{
    WeightBasis b(verma_specs({0.3, 0.7}), 2);
    EXPECT_EQ(b.find({1, 1}), 1);
    EXPECT_EQ(b.find({3, 0}), -1);
    EXPECT_LT(std::abs(b.total_weight() - cplx(-1.0)), 1e-15);
}

TEST(QNumber, Limits)
{
    EXPECT_EQ(qnum(2.5, 0.0), cplx(2.5));
    cplx q = std::exp(kappa);
    EXPECT_LT(std::abs(qnum(2.0, kappa) - (q + 1.0 / q)), 1e-14);
}

TEST(Relations, ClassicalAndQuantum)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-1.5, 1.5), V(0.2, 0.8);
    for (int n = 1; n <= 3; ++n)
        for (int l = 1; l <= 3; ++l) {
            CVec la(n);
            for (auto& v : la) v = cplx(U(rng), V(rng));
            for (cplx k : {cplx(0.0), kappa}) {
                WeightBasis b(verma_specs(la), l);
                auto f = act_fq(b, k), e = act_eq(b, k);
                Matrix comm = act_eq(f.codomain, k).M * f.M - act_fq(e.codomain, k).M * e.M;
                Matrix rhs = Matrix::Identity(b.dim(), b.dim()) * qnum(2.0 * b.total_weight(), k);
                EXPECT_LT(rel(comm, rhs), 1e-11) << n << " " << l;
            }
        }
}

TEST(Relations, IrreducibleQuotientIsClosed)
{
    // f^2 v = 0 in L_{1/2}: e f and f e stay inside the truncated basis
    auto specs = irreducible_specs({0.5, cplx(-0.7, 0.35)});
    WeightBasis b(specs, 2);
    auto f = act_f(b), e = act_e(b);
    Matrix comm = act_e(f.codomain).M * f.M - act_f(e.codomain).M * e.M;
    Matrix rhs = Matrix::Identity(b.dim(), b.dim()) * (2.0 * b.total_weight());
    EXPECT_LT(rel(comm, rhs), 1e-12);
}

TEST(SingularVectors, KernelDimensionAndAnnihilation)
{
    CVec la{cplx(0.3, 0.4), cplx(-0.6, 0.25), cplx(1.1, 0.5)};
    for (int l = 1; l <= 3; ++l)
        for (cplx k : {cplx(0.0), kappa}) {
            WeightBasis b(verma_specs(la), l), below(verma_specs(la), l - 1);
            auto sv = singular_vectors(b, k);
            EXPECT_EQ(sv.vectors.cols(), b.dim() - below.dim());
            EXPECT_FALSE(sv.ambiguous);
            EXPECT_LT((act_eq(b, k).M * sv.vectors).norm(), 1e-11);
        }
}

TEST(Projectors, ResolutionOfIdentity)
{
    auto specs = verma_specs({cplx(0.3, 0.4), cplx(-0.6, 0.25)});
    for (int l = 0; l <= 4; ++l)
        for (cplx k : {cplx(0.0), kappa}) {
            auto pr = projectors(specs, l, k);
            ASSERT_EQ(static_cast<int>(pr.P.size()), l + 1);
            Matrix sum = Matrix::Zero(l + 1, l + 1);
            for (std::size_t r = 0; r < pr.P.size(); ++r) {
                sum += pr.P[r];
                for (std::size_t s = 0; s < pr.P.size(); ++s) {
                    Matrix prod = pr.P[r] * pr.P[s];
                    EXPECT_LT((r == s ? (prod - pr.P[r]) : prod).norm(), 1e-11);
                }
            }
            EXPECT_LT(rel(sum, Matrix::Identity(l + 1, l + 1)), 1e-12);
        }
}

TEST(Projectors, RequireTwoFactors)
{
    EXPECT_THROW(projectors(verma_specs({0.1, 0.2, 0.3}), 1), Error);
}
