#include <gtest/gtest.h>

#include <random>

#include "qkz/combinatorics.hpp"

using namespace qkz;

namespace {

Params fixture()
{
    Params P;
    P.n = 2;
    P.l = 1;
    P.p = -3.0;
    P.mu = {0.5, 1.0};
    P.z = {{0.2, 0.1}, {-0.3, -0.4}};
    P.lambda = {{-0.8, 0.3}, {-1.1, -0.2}};
    return P;
}

} // namespace

TEST(Indices, CountsMatchBinomial)
{
    for (int n = 1; n <= 4; ++n)
        for (int l = 0; l <= 5; ++l) EXPECT_EQ(enumerate_indices(n, l).size(), binomial(n + l - 1, n - 1)) << n << " " << l;
}

TEST(Indices, LexicographicAndOnLevel)
{
    auto v = enumerate_indices(3, 3);
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
    EXPECT_EQ(std::adjacent_find(v.begin(), v.end()), v.end());
    for (auto& idx : v) {
        EXPECT_EQ(level(idx), 3);
        for (int x : idx) EXPECT_GE(x, 0);
    }
    EXPECT_EQ(enumerate_indices(2, 2).back(), (MultiIndex{2, 0}));
}

TEST(Dominance, Classification)
{
    EXPECT_TRUE(is_dominant(0.0));
    EXPECT_TRUE(is_dominant(0.5));
    EXPECT_TRUE(is_dominant(3.0));
    EXPECT_FALSE(is_dominant(-0.5));
    EXPECT_FALSE(is_dominant(0.4));
    EXPECT_FALSE(is_dominant(cplx(0.5, 0.1)));
    EXPECT_EQ(twice(1.5), 3);
}

TEST(Dominance, NonAdmissibleSets)
{
    CVec L{0.5, {-0.6, 0.25}};
    EXPECT_EQ(dominant_set(L), (std::set<int>{0}));
    EXPECT_EQ(non_admissible_set({2, 0}, L), (std::set<int>{0}));
    EXPECT_TRUE(non_admissible_set({1, 1}, L).empty());
    EXPECT_TRUE(is_admissible({1, 5}, L));
    EXPECT_FALSE(is_admissible({3, 0}, L));
}

TEST(Dominance, AdmissibleIffEmptySet)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> h(0, 4);
    for (int draw = 0; draw < 50; ++draw) {
        CVec L{0.5 * h(rng), cplx(0.5 * h(rng), draw % 2 ? 0.0 : 0.3), 0.5 * h(rng)};
        for (auto& idx : enumerate_indices(3, 4)) EXPECT_EQ(is_admissible(idx, L), non_admissible_set(idx, L).empty());
    }
}

TEST(PrimeData, ReflectsDominantCoordinates)
{
    CVec L{0.5, {-0.6, 0.25}};
    auto d = prime_data({2, 1}, {3, 0}, L, {0});
    EXPECT_EQ(d.l_prime, (MultiIndex{0, 1}));
    EXPECT_EQ(d.m_prime, (MultiIndex{1, 0}));
    EXPECT_EQ(d.level_prime, 1);
    EXPECT_NEAR(std::abs(d.Lambda_prime[0] - cplx(-1.5)), 0.0, 1e-15);
    EXPECT_EQ(d.Lambda_prime[1], L[1]);
}

TEST(PrimeData, RejectsBadInput)
{
    CVec L{0.5, {-0.6, 0.25}};
    EXPECT_THROW(prime_data({1, 1}, {2, 0}, L, {0}), Error);
    EXPECT_THROW(prime_data({2, 0}, {2, 0}, L, {1}), Error);
}

TEST(Conditions, FixturePasses)
{
    auto rep = check_conditions(fixture());
    EXPECT_TRUE(rep.all_pass());
    for (auto name : {"step", "weights1", "weights2", "resonance", "step3", "weights3"}) EXPECT_NO_THROW(rep.get(name));
    EXPECT_TRUE(rep.dominant.empty());
}

TEST(Conditions, SmallStepFailsStep3)
{
    Params P = fixture();
    P.p = -2.0;
    P.l = 2;
    auto rep = check_conditions(P);
    EXPECT_FALSE(rep.get("step3").pass);
    EXPECT_FALSE(rep.all_pass());
}

TEST(Conditions, UnknownNameThrows)
{
    EXPECT_THROW(check_conditions(fixture()).get("nope"), Error);
}
