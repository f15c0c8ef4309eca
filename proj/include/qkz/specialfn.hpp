#pragma once

#include <array>
#include <set>

#include "combinatorics.hpp"

namespace qkz {

/// A nonzero complex number stored as log|x| and arg x.
struct LogComplex {
    double log_magnitude = 0.0;
    double phase = 0.0;

    static LogComplex from_log(cplx lg) { return {lg.real(), lg.imag()}; }
    cplx log() const { return {log_magnitude, phase}; }
    cplx value() const { return std::exp(log()); }

    LogComplex operator+(const LogComplex& o) const { return {log_magnitude + o.log_magnitude, phase + o.phase}; }
    LogComplex operator-(const LogComplex& o) const { return {log_magnitude - o.log_magnitude, phase - o.phase}; }
};

namespace detail {

// B_{2k} / (2k (2k-1)), k = 1..10
inline constexpr std::array<double, 10> stirling_coeff = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

inline cplx stirling(cplx w)
{
    cplx inv = 1.0 / w, inv2 = inv * inv;
    cplx s = 0.0, pw = inv;
    for (double c : stirling_coeff) {
        s += c * pw;
        pw *= inv2;
    }
    return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * pi) + s;
}

} // namespace detail

inline constexpr double gamma_pole_margin = 1e-10;

/// Principal branch of log Gamma (analytic on C minus (-inf, 0]).
/// Stirling series for |w| >= 15, Re w >= 0; otherwise shifted up with
/// log Gamma(w) = log Gamma(w+N) - sum log(w+k).
inline cplx lgamma_c(cplx w)
{
    double r = std::round(w.real());
    if (r <= 0.0 && std::abs(w - r) < gamma_pole_margin)
        throw Error(Error::Kind::pole, "log_gamma: argument at a pole of Gamma");
    cplx shift = 0.0;
    while (w.real() < 0.0 || std::abs(w) < 15.0) {
        shift += std::log(w);
        w += 1.0;
    }
    return detail::stirling(w) - shift;
}

inline LogComplex log_gamma(cplx w) { return LogComplex::from_log(lgamma_c(w)); }

/// log sin(a), avoiding overflow for large |Im a|. The branch is not principal.
inline cplx log_sin(cplx a)
{
    if (a.imag() > 1.0) return -I * a + std::log((std::exp(2.0 * I * a) - 1.0) / (2.0 * I));
    if (a.imag() < -1.0) return I * a + std::log((1.0 - std::exp(-2.0 * I * a)) / (2.0 * I));
    return std::log(std::sin(a));
}

/// log of the phase function at the point t.
inline cplx phase_log(const CVec& t, const Params& P)
{
    const cplx p = P.p;
    cplx s = 0.0;
    for (auto tj : t) s += P.mu * tj / p;
    for (int i = 0; i < P.n; ++i)
        for (auto tj : t) s += lgamma_c((tj - P.z[i] + P.lambda[i]) / p) - lgamma_c((tj - P.z[i] - P.lambda[i]) / p);
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
            s += lgamma_c((t[i] - t[j] - 1.0) / p) - lgamma_c((t[i] - t[j] + 1.0) / p);
    return s;
}

inline cplx sin_p(cplx x, cplx p) { return std::sin(pi * x / p); }

/// c_l(lambda) = prod_m prod_{s<l_m} sin(pi(s+1)/p) sin(pi(2 lambda_m - s)/p) / sin(pi/p).
inline cplx weight_coefficient(const MultiIndex& idx, const CVec& lambda, cplx p)
{
    cplx c = 1.0;
    for (std::size_t m = 0; m < idx.size(); ++m)
        for (int s = 0; s < idx[m]; ++s)
            c *= sin_p(s + 1.0, p) * sin_p(2.0 * lambda[m] - double(s), p) / sin_p(1.0, p);
    return c;
}

/// psi_k = -Gamma(-(k+1)/p) Gamma(1/p)^{k+1} prod_{j<=k+1} sin(j pi/p) / (pi^{k+2} k! (k+1)!).
inline cplx psi_k(int k, cplx p)
{
    if (k < 0) throw Error(Error::Kind::domain, "psi_k: k must be >= 0");
    cplx lg = lgamma_c(-(k + 1.0) / p) + double(k + 1) * lgamma_c(1.0 / p);
    cplx prod = 1.0;
    for (int j = 1; j <= k + 1; ++j) prod *= sin_p(double(j), p);
    return -std::exp(lg) * prod / (std::pow(pi, k + 2) * factorial(k) * factorial(k + 1));
}

/// phi_{lambda,j,k}(z); j is 0-based, the inner products run over positions i < j and i > j.
inline cplx phi(const CVec& lambda, int j, int k, const CVec& z, cplx p)
{
    const int n = static_cast<int>(z.size());
    cplx v = 0.0;
    for (int s = 0; s <= k; ++s) {
        for (int i = 0; i < j; ++i)
            v += lgamma_c((z[i] - z[j] + lambda[i] + lambda[j] - double(s)) / p) -
                 lgamma_c((z[i] - z[j] - lambda[i] - lambda[j] + double(s)) / p);
        for (int i = j + 1; i < n; ++i)
            v += lgamma_c((z[j] - z[i] + lambda[j] + lambda[i] - double(s)) / p) -
                 lgamma_c((z[j] - z[i] - lambda[j] - lambda[i] + double(s)) / p);
    }
    return std::exp(v);
}

/// Factor contributed by one dominant coordinate j (k = 2 Lambda_j) to the resonant reduction:
/// (k+1)! (2 pi i)^{k+1} (pi/p) psi_k phi e^{mu(k+1) z_j/p}.
/// The bare psi_k phi e^{mu(k+1) z_j pi i/p} does not match the cycle integrals; frakC_bare keeps it.
inline cplx reduction_factor(const CVec& lambda, int j, const CVec& z, cplx p, cplx mu)
{
    if (!is_dominant(lambda[j])) throw Error(Error::Kind::domain, "reduction_factor: coordinate is not dominant");
    const int k = twice(lambda[j]);
    cplx norm = factorial(k + 1) * std::pow(2.0 * pi * I, k + 1) * (pi / p);
    return norm * psi_k(k, p) * phi(lambda, j, k, z, p) * std::exp(mu * double(k + 1) * z[j] / p);
}

/// C_Lambda(z) relating J at Lambda to the reduced pairing at Lambda'(B).
inline cplx frakC(const CVec& lambda, const CVec& z, const std::set<int>& B, int l, cplx p, cplx mu)
{
    int lp = l;
    for (int j : B) {
        if (!is_dominant(lambda[j])) throw Error(Error::Kind::domain, "frakC: B contains a non-dominant coordinate");
        lp -= twice(lambda[j]) + 1;
    }
    if (lp < 0) throw Error(Error::Kind::domain, "frakC: l'(B) is negative");
    // each reduction sees the weights already reflected by the previous ones
    cplx c = factorial(l) / factorial(lp);
    CVec cur = lambda;
    for (int j : B) {
        c *= reduction_factor(cur, j, z, p, mu);
        cur[j] = -cur[j] - 1.0;
    }
    return c;
}

/// C_Lambda built from the bare factors psi_k phi e^{mu(k+1) z_j pi i/p}.
inline cplx frakC_bare(const CVec& lambda, const CVec& z, const std::set<int>& B, int l, cplx p, cplx mu)
{
    int lp = l;
    for (int j : B) lp -= twice(lambda[j]) + 1;
    cplx c = factorial(l) / factorial(std::max(lp, 0));
    for (int j : B) {
        const int k = twice(lambda[j]);
        c *= std::exp(mu * double(k + 1) * z[j] * pi * I / p) * psi_k(k, p) * phi(lambda, j, k, z, p);
    }
    return c;
}

/// log(e^mu - 1) with imaginary part in [0, 2 pi).
inline cplx log_em1(cplx mu)
{
    cplx v = std::log(std::exp(mu) - 1.0);
    if (v.imag() < 0.0) v += 2.0 * pi * I;
    return v;
}

/// log Xi_l. The inner Gamma product runs over s = 0..l_m-1.
inline cplx xi_log(const MultiIndex& idx, const CVec& Lambda, cplx p, cplx mu)
{
    const int l = level(idx);
    const cplx L = log_em1(mu);
    cplx v = double(l) * std::log(2.0 * I) + std::log(factorial(l)) - double(l) * lgamma_c(-1.0 / p);
    for (std::size_t m = 0; m < idx.size(); ++m) {
        const double lm = idx[m];
        v += L * (lm * (lm - 1.0) - 2.0 * lm * Lambda[m]) / p;
        v += (mu + pi * I) * (lm * Lambda[m] - lm * (lm - 1.0) / 2.0) / p;
        for (int s = 0; s < idx[m]; ++s) v += lgamma_c((2.0 * Lambda[m] - double(s)) / p) + lgamma_c(-(s + 1.0) / p);
    }
    return v;
}

inline cplx xi_constant(const MultiIndex& idx, const CVec& Lambda, cplx p, cplx mu)
{
    return std::exp(xi_log(idx, Lambda, p, mu));
}

} // namespace qkz
