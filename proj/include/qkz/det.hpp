#pragma once

#include "hyperint.hpp"

namespace qkz {

/// log det J^l(z, lambda) from the closed product formula; arg(e^mu - 1) in [0, 2 pi).
inline cplx det_closed_form_log(const CVec& z, const CVec& la, int l, cplx p, cplx mu)
{
    const int n = static_cast<int>(z.size());
    if (l == 0) return 0.0;
    const double N = binomial(n + l - 1, n - 1);
    const double b1 = binomial(n + l - 1, n), b2 = binomial(n + l - 1, n + 1);
    cplx sl = 0.0, sz = 0.0;
    for (int m = 0; m < n; ++m) {
        sl += la[m];
        sz += z[m];
    }
    const cplx L = log_em1(mu);
    cplx v = l * N * std::log(2.0 * I) + N * std::log(factorial(l));
    v += L * (-2.0 * sl / p * b1 + 2.0 * n / p * b2);
    v += mu * sz / p * b1;
    v += (mu + pi * I) * (sl / p * b1 - double(n) / p * b2);
    for (int s = 0; s < l; ++s) {
        cplx b = double(n) * (lgamma_c(1.0 + 1.0 / p) - lgamma_c(1.0 + (s + 1.0) / p));
        for (int m = 0; m < n; ++m) b += std::log(pi) - lgamma_c(1.0 - (2.0 * la[m] - double(s)) / p);
        for (int k = 0; k < n; ++k)
            for (int m = k + 1; m < n; ++m)
                b += lgamma_c((z[k] + la[k] - z[m] + la[m] - double(s)) / p) -
                     lgamma_c((z[k] - la[k] - z[m] - la[m] + double(s)) / p);
        v += binomial(n + l - s - 2, n - 1) * b;
    }
    return v;
}

inline cplx det_closed_form(const CVec& z, const CVec& la, int l, cplx p, cplx mu)
{
    return std::exp(det_closed_form_log(z, la, l, p, mu));
}

inline cplx det_closed_form(const Params& P) { return det_closed_form(P.z, P.lambda, P.l, P.p, P.mu); }

namespace detail {

// dim (L_{Lambda_i}, i in S)_r
inline int irreducible_dim(const CVec& Lambda, const std::vector<int>& S, int r)
{
    if (r < 0) return 0;
    if (S.empty()) return r == 0 ? 1 : 0;
    CVec sub;
    for (int i : S) sub.push_back(Lambda[i]);
    return WeightBasis(irreducible_specs(sub), r).dim();
}

// dim L_Lambda, or a large sentinel for infinite-dimensional modules
inline int module_dim(cplx L)
{
    return is_dominant(L) ? twice(L) + 1 : 1 << 20;
}

} // namespace detail

/// D_m(Lambda) = sum_{r=1}^{min(l, dim L_m - 1)} r dim(L without factor m)_{l-r}; m is 0-based.
inline int det_D(const CVec& Lambda, int l, int m)
{
    std::vector<int> others;
    for (int i = 0; i < static_cast<int>(Lambda.size()); ++i)
        if (i != m) others.push_back(i);
    int D = 0;
    for (int r = 1; r <= std::min(l, detail::module_dim(Lambda[m]) - 1); ++r)
        D += r * detail::irreducible_dim(Lambda, others, l - r);
    return D;
}

/// E_km(s, Lambda) over r = s+1 .. min(l, dim L_k + dim L_m - 1 - s). Summands with
/// dim (L_k (x) L_m)_r <= s are dropped; for two finite factors the last r would otherwise count -1.
inline int det_E(const CVec& Lambda, int l, int k, int m, int s)
{
    std::vector<int> others;
    for (int i = 0; i < static_cast<int>(Lambda.size()); ++i)
        if (i != k && i != m) others.push_back(i);
    const long top = std::min<long>(l, long(detail::module_dim(Lambda[k])) + detail::module_dim(Lambda[m]) - 1 - s);
    int E = 0;
    for (int r = s + 1; r <= top; ++r)
        E += std::max(detail::irreducible_dim(Lambda, {k, m}, r) - s - 1, 0) * detail::irreducible_dim(Lambda, others, l - r);
    return E;
}

inline int det_d(const CVec& Lambda, int l, int k, int m)
{
    return std::min({l, detail::module_dim(Lambda[k]) - 1, detail::module_dim(Lambda[m]) - 1});
}

/// log of prod over admissible l of c_l(Lambda) Xi_l.
inline cplx det_Dl_log(const CVec& Lambda, int l, cplx p, cplx mu)
{
    cplx v = 0.0;
    for (auto& idx : enumerate_indices(static_cast<int>(Lambda.size()), l))
        if (is_admissible(idx, Lambda)) v += std::log(weight_coefficient(idx, Lambda, p)) + xi_log(idx, Lambda, p, mu);
    return v;
}

/// det J_adm from the D_m / E_km form. The Gamma factor in the denominator takes +s.
inline cplx det1_log(const CVec& z, const CVec& Lambda, int l, cplx p, cplx mu)
{
    const int n = static_cast<int>(z.size());
    cplx v = det_Dl_log(Lambda, l, p, mu);
    for (int m = 0; m < n; ++m) v += mu * double(det_D(Lambda, l, m)) * z[m] / p;
    for (int k = 0; k < n; ++k)
        for (int m = k + 1; m < n; ++m)
            for (int s = 0; s <= det_d(Lambda, l, k, m); ++s) {
                int E = det_E(Lambda, l, k, m, s);
                if (E == 0) continue;
                v += double(E) * (lgamma_c((z[k] + Lambda[k] - z[m] + Lambda[m] - double(s)) / p) -
                                  lgamma_c((z[k] - Lambda[k] - z[m] - Lambda[m] + double(s)) / p));
            }
    return v;
}

/// det J_adm as the alternating product over A in B(Lambda) of (C_Lambda(A) det J^{l'(A)}(z, Lambda'(A)))^{(-1)^|A|}.
/// C_Lambda(A) is frakC(A) once for every m in Z^n_l whose non-admissible set contains A.
/// For |A| = 1 this is the per-coordinate factor l!/(l - 2 Lambda_i - 1)! times the reduction factor.
inline cplx det_prod_log(const CVec& z, const CVec& Lambda, int l, cplx p, cplx mu)
{
    const int n = static_cast<int>(z.size());
    const auto Bset = dominant_set(Lambda);
    const std::vector<int> B(Bset.begin(), Bset.end());
    cplx total = 0.0;
    const auto all = enumerate_indices(n, l);
    for (unsigned mask = 0; mask < (1u << B.size()); ++mask) {
        std::vector<int> A;
        for (std::size_t i = 0; i < B.size(); ++i)
            if (mask & (1u << i)) A.push_back(B[i]);
        int lp = l;
        CVec Lp = Lambda;
        for (int i : A) {
            lp -= twice(Lambda[i]) + 1;
            Lp[i] = -Lambda[i] - 1.0;
        }
        if (lp < 0) continue;
        const cplx logC = std::log(frakC(Lambda, z, std::set<int>(A.begin(), A.end()), l, p, mu));
        cplx sub = 0.0;
        for (auto& mb : all) {
            bool contains = true;
            for (int i : A) contains = contains && mb[i] > twice(Lambda[i]);
            if (contains) sub += logC;
        }
        if (lp > 0) sub += det_closed_form_log(z, Lp, lp, p, mu);
        total += (A.size() % 2 == 0 ? 1.0 : -1.0) * sub;
    }
    return total;
}

struct DetAdm {
    cplx det_prod;
    cplx det1;
    double agreement;  // |det1 / det_prod - 1|
};

inline DetAdm det_adm_product(const CVec& z, const CVec& Lambda, int l, cplx p, cplx mu)
{
    DetAdm d;
    cplx a = det_prod_log(z, Lambda, l, p, mu), b = det1_log(z, Lambda, l, p, mu);
    d.det_prod = std::exp(a);
    d.det1 = std::exp(b);
    d.agreement = std::abs(std::exp(b - a) - 1.0);
    return d;
}

struct AsymptoticResult {
    cplx ratio;                  // computed leading component over the predicted leading term
    std::vector<double> others;  // |other components| / |leading component|
    double abs_error = 0.0;
};

/// Leading behaviour of the sigma-solution with index l in the zone where Re z_{sigma_1} << ... << Re z_{sigma_n}:
/// I(w_{sigma l}, W^sigma_l) against Xi_l e^{mu sum l_m z_{sigma_m}/p} prod_{k<m} ((z_{sigma_k}-z_{sigma_m})/p)^{2(l_k L_m + l_m L_k - l_k l_m)/p}
/// with L = sigma Lambda.
inline AsymptoticResult asymptotic_check(const std::vector<int>& sigma0, const MultiIndex& idx, const Params& P,
                                         const QuadOptions& o)
{
    const int n = P.n;
    std::vector<int> sigma = sigma0.empty() ? detail::identity_perm(n) : sigma0;
    Solution s = solution_Psi(P, WeightFnSpec{Family::trigonometric, idx, sigma}, o);
    const CVec zs = permute(sigma, P.z), Ls = permute(sigma, P.lambda);
    cplx lg = xi_log(idx, Ls, P.p, P.mu);
    for (int m = 0; m < n; ++m) lg += P.mu * double(idx[m]) * zs[m] / P.p;
    for (int k = 0; k < n; ++k)
        for (int m = k + 1; m < n; ++m) {
            cplx e = 2.0 * (double(idx[k]) * Ls[m] + double(idx[m]) * Ls[k] - double(idx[k] * idx[m])) / P.p;
            lg += e * std::log((zs[k] - zs[m]) / P.p);
        }
    // the component f^{l} v in original module order carries power idx[m] on module sigma_m
    MultiIndex lead(n);
    for (int m = 0; m < n; ++m) lead[sigma[m]] = idx[m];
    AsymptoticResult r;
    cplx leading = 0.0;
    for (std::size_t i = 0; i < s.basis.size(); ++i)
        if (s.basis[i] == lead) leading = s.psi(i);
    r.ratio = leading / std::exp(lg);
    for (std::size_t i = 0; i < s.basis.size(); ++i)
        if (s.basis[i] != lead) r.others.push_back(std::abs(s.psi(i)) / std::abs(leading));
    r.abs_error = s.abs_error / std::abs(std::exp(lg));
    return r;
}

/// z placed in the asymptotic zone of sigma with consecutive real separation `sep`, each
/// successive point also raised by `sep` so the pole families stay separable.
inline CVec zone_points(const std::vector<int>& sigma, int n, double sep)
{
    CVec z(n);
    for (int m = 0; m < n; ++m) z[sigma.empty() ? m : sigma[m]] = cplx(sep * (m - 0.5 * (n - 1)), sep * m);
    return z;
}

} // namespace qkz
