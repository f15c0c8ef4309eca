#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"

namespace qkz {

/// An element of Z^n_l: non-negative entries summing to the level.
using MultiIndex = std::vector<int>;

inline int level(const MultiIndex& idx)
{
    int s = 0;
    for (int v : idx) s += v;
    return s;
}

/// All of Z^n_l in lexicographic order.
inline std::vector<MultiIndex> enumerate_indices(int n, int l)
{
    if (n < 1 || l < 0) throw Error(Error::Kind::domain, "enumerate_indices needs n >= 1, l >= 0");
    std::vector<MultiIndex> out;
    MultiIndex cur(n, 0);
    // recursive fill, first coordinate varies slowest
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == n - 1) {
            cur[pos] = remaining;
            out.push_back(cur);
            return;
        }
        for (int a = 0; a <= remaining; ++a) {
            cur[pos] = a;
            self(self, pos + 1, remaining - a);
        }
    };
    rec(rec, 0, l);
    return out;
}

/// l^m = l_1 + ... + l_m, with l^0 = 0.
inline int partial_sum(const MultiIndex& idx, int m)
{
    if (m < 0 || m > static_cast<int>(idx.size()))
        throw Error(Error::Kind::domain, "partial_sum: m out of range");
    int s = 0;
    for (int i = 0; i < m; ++i) s += idx[i];
    return s;
}

inline constexpr double dominance_tol = 1e-9;

/// True when 2*lambda is a non-negative integer (within dominance_tol).
inline bool is_dominant(cplx lambda)
{
    double two = 2.0 * lambda.real();
    double r = std::round(two);
    return std::abs(2.0 * lambda - cplx(r, 0.0)) < dominance_tol && r >= 0.0;
}

/// 2*lambda rounded, only meaningful when is_dominant(lambda).
inline int twice(cplx lambda) { return static_cast<int>(std::lround(2.0 * lambda.real())); }

/// Positions (0-based) i with Lambda_i dominant and l_i > 2 Lambda_i.
inline std::set<int> non_admissible_set(const MultiIndex& idx, const CVec& Lambda)
{
    std::set<int> out;
    for (std::size_t i = 0; i < idx.size(); ++i)
        if (is_dominant(Lambda[i]) && idx[i] > twice(Lambda[i])) out.insert(static_cast<int>(i));
    return out;
}

inline bool is_admissible(const MultiIndex& idx, const CVec& Lambda)
{
    return non_admissible_set(idx, Lambda).empty();
}

/// B(Lambda): positions with Lambda_i dominant.
inline std::set<int> dominant_set(const CVec& Lambda)
{
    std::set<int> out;
    for (std::size_t i = 0; i < Lambda.size(); ++i)
        if (is_dominant(Lambda[i])) out.insert(static_cast<int>(i));
    return out;
}

struct PrimeData {
    MultiIndex l_prime;
    MultiIndex m_prime;
    CVec Lambda_prime;
    int level_prime = 0;
};

/// Reflected indices and weights for a set B of dominant positions.
inline PrimeData prime_data(const MultiIndex& l, const MultiIndex& m, const CVec& Lambda, const std::set<int>& B)
{
    PrimeData d{l, m, Lambda, level(l)};
    for (int i : B) {
        if (!is_dominant(Lambda[i]))
            throw Error(Error::Kind::domain, "prime_data: position " + std::to_string(i + 1) + " is not dominant");
        int shift = twice(Lambda[i]) + 1;
        d.l_prime[i] -= shift;
        d.m_prime[i] -= shift;
        d.Lambda_prime[i] = -Lambda[i] - 1.0;
        d.level_prime -= shift;
        if (d.l_prime[i] < 0 || d.m_prime[i] < 0)
            throw Error(Error::Kind::domain, "prime_data: negative primed entry at position " + std::to_string(i + 1));
    }
    return d;
}

struct ConditionResult {
    std::string name;
    bool pass = true;
    double margin = std::numeric_limits<double>::infinity();
    std::string detail;
};

struct AdmissibilityReport {
    std::vector<ConditionResult> conditions;
    std::set<int> dominant;
    std::map<MultiIndex, std::set<int>> non_admissible;

    bool all_pass() const
    {
        return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
    }
    const ConditionResult& get(const std::string& name) const
    {
        for (const auto& c : conditions)
            if (c.name == name) return c;
        throw Error(Error::Kind::domain, "unknown condition " + name);
    }
};

inline constexpr double condition_tol = 1e-9;

namespace detail {

inline void hit(ConditionResult& c, cplx x, cplx p, const std::string& what, int sign = 0)
{
    double d = lattice_distance(x, p, sign);
    if (d < c.margin) {
        c.margin = d;
        c.detail = what;
    }
}

} // namespace detail

/// Evaluate the lattice exclusion conditions (step)..(weights3), each with its margin.
inline AdmissibilityReport check_conditions(const Params& P)
{
    AdmissibilityReport rep;
    const int n = P.n, l = P.l;
    const cplx p = P.p;
    const CVec& la = P.lambda;
    const CVec& z = P.z;

    ConditionResult step{"step"};
    step.pass = p.real() < 0.0;
    detail::hit(step, 1.0, p, "1 in pZ");
    if (!(p.real() < 0.0)) step.detail = "Re p >= 0";

    ConditionResult w1{"weights1"};
    double maxre = -std::numeric_limits<double>::infinity();
    for (auto v : la) maxre = std::max(maxre, v.real());
    for (int s = 1; s <= l && s < 2.0 * maxre; ++s) detail::hit(w1, double(s), p, "s=" + std::to_string(s));

    ConditionResult w2{"weights2"};
    for (int m = 0; m < n; ++m)
        for (int s = 0; s < l && s < 2.0 * la[m].real(); ++s)
            detail::hit(w2, 2.0 * la[m] - double(s), p, "m=" + std::to_string(m + 1) + " s=" + std::to_string(s));

    ConditionResult res{"resonance"};
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
            if (k == m) continue;
            for (int s = 1 - l; s <= l - 1; ++s)
                for (int sg : {+1, -1}) {
                    cplx x = z[k] - z[m] + double(sg) * (la[k] + la[m]) + double(s);
                    detail::hit(res, x, p,
                                "k=" + std::to_string(k + 1) + " m=" + std::to_string(m + 1) + " s=" + std::to_string(s));
                }
        }

    ConditionResult s3{"step3"};
    ConditionResult w3{"weights3"};
    bool any_nondominant = false;
    for (int i = 0; i < n; ++i) {
        if (is_dominant(la[i])) continue;
        any_nondominant = true;
        for (int s = 0; s < l; ++s)
            detail::hit(w3, la[i] * 2.0 - double(s), p, "i=" + std::to_string(i + 1) + " s=" + std::to_string(s));
    }
    if (any_nondominant)
        for (int s = 1; s <= l; ++s) detail::hit(s3, double(s), p, "s=" + std::to_string(s));

    for (ConditionResult* c : {&step, &w1, &w2, &res, &s3, &w3}) {
        if (c != &step || p.real() < 0.0) c->pass = c->margin > condition_tol;
        rep.conditions.push_back(*c);
    }

    rep.dominant = dominant_set(la);
    for (const auto& idx : enumerate_indices(n, l)) rep.non_admissible[idx] = non_admissible_set(idx, la);
    return rep;
}

} // namespace qkz
