#include <gtest/gtest.h>

#include "qkz/det.hpp"

using namespace qkz;

namespace {

const cplx p = -3.3, mu(0.5, 1.0);
const CVec z{{0.0, 6.0}, {0.0, 11.75}, {0.3, 17.2}};

CVec first(const CVec& v, int n) { return CVec(v.begin(), v.begin() + n); }

} // namespace

TEST(Det, LevelZero)
{
    EXPECT_EQ(det_closed_form(first(z, 2), {0.3, 0.2}, 0, p, mu), cplx(1.0));
}

TEST(Det, ClosedFormMatchesIntegralsSingleFactor)
{
    Params P;
    P.n = 1;
    P.z = {{0.0, 0.1}};
    P.lambda = {{-0.8, 0.3}};
    QuadOptions o;
    o.tol = 1e-12;
    for (int l = 1; l <= 2; ++l) {
        P.l = l;
        JMatrix J = J_matrix(P, trivial_cycle(auto_contour(P), 1), o);
        cplx cf = det_closed_form(P);
        EXPECT_LT(std::abs(J.J.determinant() - cf) / std::abs(cf), 1e-9) << l;
    }
}

TEST(Det, Exponents)
{
    CVec generic{{0.3, 0.2}, {-0.6, 0.25}};
    // D_1 = sum_{r=1}^{l} r dim V_{l-r} with a one-dimensional complement at each level
    EXPECT_EQ(det_D(generic, 2, 0), 3);
    EXPECT_EQ(det_D(generic, 3, 0), 6);
    CVec res{0.5, {-0.6, 0.25}};
    EXPECT_EQ(det_D(res, 3, 0), 1);
    EXPECT_EQ(det_d(res, 3, 0, 1), 1);
    EXPECT_EQ(det_d(generic, 3, 0, 1), 3);
}

TEST(Det, GenericProductFormsAgree)
{
    // without dominant weights both products reduce to the closed form
    CVec L{{0.3, 0.2}, {-0.6, 0.25}, {1.1, -0.4}};
    for (int n = 1; n <= 3; ++n)
        for (int l = 1; l <= 3; ++l) {
            CVec zz = first(z, n), LL = first(L, n);
            cplx cf = det_closed_form_log(zz, LL, l, p, mu);
            EXPECT_LT(std::abs(std::exp(det1_log(zz, LL, l, p, mu) - cf) - 1.0), 1e-10) << n << " " << l;
            EXPECT_LT(std::abs(std::exp(det_prod_log(zz, LL, l, p, mu) - cf) - 1.0), 1e-12) << n << " " << l;
        }
}

TEST(Det, ResonantProductFormsAgree)
{
    const std::vector<CVec> weights = {
        {0.5, {-0.6, 0.25}},
        {1.0, {-0.6, 0.25}},
        {0.5, 0.0},
        {0.5, {-0.6, 0.25}, 1.0},
        {0.0, 0.0},
        {0.0, 0.0, {-0.6, 0.25}},
        {{-0.6, 0.25}, 0.0, 0.5},
    };
    for (auto& L : weights)
        for (int l = 1; l <= 4; ++l) {
            auto d = det_adm_product(first(z, static_cast<int>(L.size())), L, l, p, mu);
            EXPECT_LT(d.agreement, 1e-9) << L.size() << " " << l;
        }
}

TEST(Det, EmptyAdmissibleBlockIsOne)
{
    // L_{1/2} (x) L_0 has no weight vectors below level 2
    for (int l = 2; l <= 4; ++l) {
        auto d = det_adm_product(first(z, 2), {0.5, 0.0}, l, p, mu);
        EXPECT_LT(std::abs(d.det_prod - 1.0), 1e-12) << l;
        EXPECT_LT(std::abs(d.det1 - 1.0), 1e-12) << l;
    }
}

TEST(Det, PairExponentsStayNonNegative)
{
    CVec L{1.0, 0.5};
    for (int l = 0; l <= 5; ++l)
        for (int s = 0; s <= 3; ++s) EXPECT_GE(det_E(L, l, 0, 1, s), 0) << l << " " << s;
}

TEST(Zone, PointsOrderedAlongSigma)
{
    CVec a = zone_points({}, 3, 10.0);
    EXPECT_LT(a[0].real(), a[1].real());
    EXPECT_LT(a[1].real(), a[2].real());
    CVec b = zone_points({2, 0, 1}, 3, 10.0);
    EXPECT_LT(b[2].real(), b[0].real());
    EXPECT_LT(b[0].real(), b[1].real());
}
