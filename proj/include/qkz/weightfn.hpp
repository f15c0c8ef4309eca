#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <random>

#include "specialfn.hpp"

namespace qkz {

enum class Family { rational, trigonometric, singular };

/// Selects one weight function. sigma (0-based, empty = identity) only applies to the trigonometric family.
struct WeightFnSpec {
    Family family = Family::trigonometric;
    MultiIndex index;
    std::vector<int> sigma;
};

inline constexpr int max_symmetrized_level = 6;

/// Permutations of {0..l-1} in lexicographic order with their inversion pairs (a, b), a < b,
/// each contributing the factor g(t_a - t_b).
struct PermTable {
    int l = 0;
    std::vector<std::vector<int>> perms;
    std::vector<std::vector<std::pair<int, int>>> inversions;

    explicit PermTable(int level) : l(level)
    {
        if (l > max_symmetrized_level)
            throw Error(Error::Kind::domain, "symmetrization capped at l = " + std::to_string(max_symmetrized_level));
        std::vector<int> p(l);
        std::iota(p.begin(), p.end(), 0);
        do {
            perms.push_back(p);
            std::vector<std::pair<int, int>> inv;
            for (int i = 0; i < l; ++i)
                for (int j = i + 1; j < l; ++j)
                    if (p[i] > p[j]) inv.emplace_back(p[j], p[i]);
            inversions.push_back(inv);
        } while (std::next_permutation(p.begin(), p.end()));
    }
};

inline const PermTable& perm_table(int l)
{
    static thread_local std::vector<std::unique_ptr<PermTable>> cache;
    if (l < 0) throw Error(Error::Kind::domain, "negative level");
    if (static_cast<int>(cache.size()) <= l) cache.resize(l + 1);
    if (!cache[l]) cache[l] = std::make_unique<PermTable>(l);
    return *cache[l];
}

/// Module owning slot i of the ordered variable list for an index: slots fill block 0 first.
inline std::vector<int> slot_blocks(const MultiIndex& idx)
{
    std::vector<int> b;
    for (std::size_t m = 0; m < idx.size(); ++m)
        for (int k = 0; k < idx[m]; ++k) b.push_back(static_cast<int>(m));
    return b;
}

/// sin(a)/sin(b) without overflow for large imaginary parts.
inline cplx sin_ratio(cplx a, cplx b)
{
    if (std::abs(a.imag()) < 30.0 && std::abs(b.imag()) < 30.0) return std::sin(a) / std::sin(b);
    return std::exp(log_sin(a) - log_sin(b));
}

// Single-variable factors. m is the block (0-based); the product over k < m is strict.

inline cplx rational_factor(int m, cplx t, const CVec& z, const CVec& la)
{
    cplx v = 1.0 / (t - z[m] - la[m]);
    for (int k = 0; k < m; ++k) v *= (t - z[k] + la[k]) / (t - z[k] - la[k]);
    return v;
}

inline cplx trig_factor_log(int m, cplx t, const CVec& z, const CVec& la, cplx p)
{
    const cplx c = pi / p;
    cplx v = I * c * (z[m] - t) - log_sin(c * (t - z[m] - la[m]));
    for (int k = 0; k < m; ++k) v += log_sin(c * (t - z[k] + la[k])) - log_sin(c * (t - z[k] - la[k]));
    return v;
}

inline cplx sing_factor_log(int m, cplx t, const CVec& z, const CVec& la, cplx p)
{
    const cplx c = pi / p;
    cplx v = -log_sin(c * (t - z[m] - la[m])) - log_sin(c * (t - z[m + 1] - la[m + 1]));
    for (int k = 0; k < m; ++k) v += log_sin(c * (t - z[k] + la[k])) - log_sin(c * (t - z[k] - la[k]));
    return v;
}

/// Constant prefactor of the base product.
inline cplx family_constant(Family f, const MultiIndex& idx, const CVec& z, const CVec& la, cplx p)
{
    cplx c = 1.0;
    for (std::size_t m = 0; m < idx.size(); ++m)
        for (int s = 1; s <= idx[m]; ++s) {
            switch (f) {
            case Family::rational: c /= double(s); break;
            case Family::trigonometric: c *= sin_p(1.0, p) / sin_p(double(s), p); break;
            case Family::singular:
                c *= sin_p(1.0, p) / sin_p(double(s), p) *
                     sin_p(z[m] - la[m] - z[m + 1] - la[m + 1] + double(s) - 1.0, p);
                break;
            }
        }
    return c;
}

inline cplx pair_factor(Family f, cplx x, cplx p)
{
    if (f == Family::rational) return (x - 1.0) / (x + 1.0);
    return sin_ratio(pi * (x - 1.0) / p, pi * (x + 1.0) / p);
}

/// Sum over S^l of base(t_perm) times the inversion factors.
/// F(v, m): single-variable factor of variable v in block m; G(a, b): pair factor g(t_a - t_b).
template <class FF, class GG>
cplx symmetrize(const MultiIndex& idx, FF&& F, GG&& G)
{
    const int l = level(idx);
    const PermTable& tab = perm_table(l);
    const auto blocks = slot_blocks(idx);
    cplx total = 0.0;
    for (std::size_t k = 0; k < tab.perms.size(); ++k) {
        cplx v = 1.0;
        for (int i = 0; i < l; ++i) v *= F(tab.perms[k][i], blocks[i]);
        for (auto [a, b] : tab.inversions[k]) v *= G(a, b);
        total += v;
    }
    return total;
}

namespace detail {

inline void check_level(const MultiIndex& idx, const CVec& t)
{
    if (level(idx) != static_cast<int>(t.size()))
        throw Error(Error::Kind::domain, "number of variables differs from the index level");
}

inline std::vector<int> identity_perm(int n)
{
    std::vector<int> s(n);
    std::iota(s.begin(), s.end(), 0);
    return s;
}

} // namespace detail

/// Rational weight function w_l(t, z, lambda).
inline cplx eval_w(const MultiIndex& idx, const CVec& t, const CVec& z, const CVec& la)
{
    detail::check_level(idx, t);
    for (std::size_t m = 0; m < z.size(); ++m)
        for (auto tj : t)
            if (std::abs(tj - z[m] - la[m]) < 1e-12) throw Error(Error::Kind::pole, "eval_w: t at z_m + lambda_m");
    const double cst = std::real(family_constant(Family::rational, idx, z, la, 1.0));
    return cst * symmetrize(
                     idx, [&](int v, int m) { return rational_factor(m, t[v], z, la); },
                     [&](int a, int b) { return pair_factor(Family::rational, t[a] - t[b], 1.0); });
}

/// Trigonometric weight function W_l(t, z, lambda).
inline cplx eval_W(const MultiIndex& idx, const CVec& t, const CVec& z, const CVec& la, cplx p)
{
    detail::check_level(idx, t);
    return family_constant(Family::trigonometric, idx, z, la, p) *
           symmetrize(
               idx, [&](int v, int m) { return std::exp(trig_factor_log(m, t[v], z, la, p)); },
               [&](int a, int b) { return pair_factor(Family::trigonometric, t[a] - t[b], p); });
}

/// sigma x = (x_{sigma_1}, ..., x_{sigma_n}).
template <class T>
std::vector<T> permute(const std::vector<int>& sigma, const std::vector<T>& x)
{
    std::vector<T> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[sigma[i]];
    return out;
}

/// W^sigma_l(t, z, lambda) = W_{sigma l}(t, sigma z, sigma lambda).
inline cplx eval_W_sigma(const std::vector<int>& sigma, const MultiIndex& idx, const CVec& t, const CVec& z,
                         const CVec& la, cplx p)
{
    return eval_W(permute(sigma, idx), t, permute(sigma, z), permute(sigma, la), p);
}

/// Singular trigonometric weight function; idx has n-1 entries.
inline cplx eval_W_sing(const MultiIndex& idx, const CVec& t, const CVec& z, const CVec& la, cplx p)
{
    detail::check_level(idx, t);
    if (z.size() < 2 || idx.size() + 1 != z.size())
        throw Error(Error::Kind::domain, "eval_W_sing needs n >= 2 and an index with n-1 entries");
    return family_constant(Family::singular, idx, z, la, p) *
           symmetrize(
               idx, [&](int v, int m) { return std::exp(sing_factor_log(m, t[v], z, la, p)); },
               [&](int a, int b) { return pair_factor(Family::singular, t[a] - t[b], p); });
}

inline cplx eval(const WeightFnSpec& s, const CVec& t, const CVec& z, const CVec& la, cplx p)
{
    switch (s.family) {
    case Family::rational: return eval_w(s.index, t, z, la);
    case Family::trigonometric:
        return s.sigma.empty() ? eval_W(s.index, t, z, la, p) : eval_W_sigma(s.sigma, s.index, t, z, la, p);
    case Family::singular: return eval_W_sing(s.index, t, z, la, p);
    }
    return 0.0;
}

/// The S^l action of the simple transposition (i, i+1): f(s_i t) g(t_i - t_{i+1}).
inline cplx act_transposition(const std::function<cplx(const CVec&)>& f, const CVec& t, int i, Family flavor, cplx p)
{
    CVec s = t;
    std::swap(s[i], s[i + 1]);
    return f(s) * pair_factor(flavor, t[i] - t[i + 1], p);
}

/// Seeded sample points in the box |Re t|, |Im t| <= 2 keeping 0.1 away from weight-function pole lines.
inline std::vector<CVec> sample_points(int count, int l, const CVec& z, const CVec& la, cplx p, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    std::vector<CVec> out;
    int guard = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++guard > 1000 * (count + 1)) throw Error(Error::Kind::conditioning, "cannot place sample points");
        CVec t(l);
        for (auto& x : t) x = cplx(U(rng), U(rng));
        bool ok = true;
        for (auto x : t)
            for (std::size_t m = 0; m < z.size() && ok; ++m)
                ok = lattice_distance(x - z[m] - la[m], p) > 0.1 && lattice_distance(x - z[m] + la[m], p) > 0.1;
        for (int a = 0; a < l && ok; ++a)
            for (int b = a + 1; b < l && ok; ++b)
                ok = lattice_distance(t[a] - t[b] + 1.0, p) > 0.1 && lattice_distance(t[a] - t[b] - 1.0, p) > 0.1;
        if (ok) out.push_back(std::move(t));
    }
    return out;
}

struct LeastSquares {
    Matrix X;
    double residual = 0.0;   // relative Frobenius residual
    double condition = 1.0;  // of the sampling matrix
};

inline LeastSquares solve_sampled(const Matrix& A, const Matrix& B)
{
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    LeastSquares out;
    out.condition = s(0) / s(s.size() - 1);
    out.X = svd.solve(B);
    out.residual = (A * out.X - B).norm() / std::max(B.norm(), 1e-300);
    return out;
}

inline constexpr double sampling_condition_limit = 1e12;

struct SingDecomposition {
    std::vector<MultiIndex> basis;  // Z^n_l, lexicographic
    Vector coefficients;            // a_m
    double residual = 0.0;
    double condition = 1.0;
    bool admissible = true;         // a_m vanishes for every non-admissible m
};

/// Coefficients a_m with W^sing = sum_m a_m W_m, from seeded samples.
inline SingDecomposition decompose_sing(const MultiIndex& kidx, const CVec& z, const CVec& la, cplx p,
                                        std::uint64_t seed = 7, const CVec* Lambda = nullptr)
{
    const int n = static_cast<int>(z.size());
    const int l = level(kidx);
    SingDecomposition out;
    out.basis = enumerate_indices(n, l);
    const int d = static_cast<int>(out.basis.size());
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto pts = sample_points(3 * d + 2, l, z, la, p, seed + 1000 * attempt);
        Matrix A(pts.size(), d), b(pts.size(), 1);
        for (std::size_t r = 0; r < pts.size(); ++r) {
            for (int c = 0; c < d; ++c) A(r, c) = eval_W(out.basis[c], pts[r], z, la, p);
            b(r, 0) = eval_W_sing(kidx, pts[r], z, la, p);
        }
        auto ls = solve_sampled(A, b);
        out.coefficients = ls.X.col(0);
        out.residual = ls.residual;
        out.condition = ls.condition;
        if (ls.condition < sampling_condition_limit) break;
        if (attempt == 1) throw Error(Error::Kind::conditioning, "decompose_sing: sampling matrix ill-conditioned");
    }
    if (Lambda) {
        double scale = out.coefficients.cwiseAbs().maxCoeff();
        for (int c = 0; c < d; ++c)
            if (!is_admissible(out.basis[c], *Lambda) && std::abs(out.coefficients(c)) > 1e-8 * std::max(scale, 1.0))
                out.admissible = false;
    }
    return out;
}

} // namespace qkz
