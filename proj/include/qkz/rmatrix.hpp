#pragma once

#include <functional>
#include <map>

#include "sl2_rep.hpp"
#include "weightfn.hpp"

namespace qkz {

inline constexpr double r_pole_margin = 1e-8;

/// Rational R-matrix on (M_1 (x) M_2)_level: sum_r Pi^(r) prod_{s<r} (x+l1+l2-s)/(x-l1-l2+s).
/// Summands absent from the weight space (irreducible factors) contribute nothing.
inline Matrix rational_r(const ModuleSpec& a, const ModuleSpec& b, int level, cplx x)
{
    Projectors pr = projectors({a, b}, level);
    const cplx L = a.lambda + b.lambda;
    Matrix R = Matrix::Zero(pr.P[0].rows(), pr.P[0].cols());
    for (int r = 0; r <= level; ++r) {
        if (pr.P[r].norm() == 0.0) continue;
        cplx c = 1.0;
        for (int s = 0; s < r; ++s) {
            cplx den = x - L + double(s);
            if (std::abs(den) < r_pole_margin)
                throw Error(Error::Kind::pole, "rational_r: x at lambda1+lambda2-" + std::to_string(s));
            c *= (x + L - double(s)) / den;
        }
        R += c * pr.P[r];
    }
    return R;
}

/// R^q(0) = q^{2 l1 l2 - 2 h(x)h} sum_k (q^2-1)^{2k} prod_{s<=k} (1-q^{2s})^{-1} (q^h f (x) q^{-h} e)^k on the weight space.
inline Matrix trig_r0(const ModuleSpec& a, const ModuleSpec& b, int level, cplx kappa)
{
    detail::check_root_of_unity(kappa, level);
    WeightBasis B({a, b}, level);
    const int d = B.dim();
    Matrix D = Matrix::Zero(d, d), X = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        const auto& idx = B.indices[j];
        const cplx wa = a.lambda - double(idx[0]), wb = b.lambda - double(idx[1]);
        D(j, j) = std::exp(kappa * (2.0 * a.lambda * b.lambda - 2.0 * wa * wb));
        if (idx[1] == 0) continue;
        int r = B.find({idx[0] + 1, idx[1] - 1});
        if (r < 0) continue;
        const double k = idx[1];
        X(r, j) = std::exp(kappa * (wa - 1.0)) * std::exp(-kappa * (wb + 1.0)) * qnum(k, kappa) *
                  qnum(2.0 * b.lambda - k + 1.0, kappa);
    }
    const cplx q2 = std::exp(2.0 * kappa);
    Matrix S = Matrix::Zero(d, d), Xk = Matrix::Identity(d, d);
    cplx coef = 1.0;
    for (int k = 0; k <= level; ++k) {
        if (k > 0) coef *= (q2 - 1.0) * (q2 - 1.0) / (1.0 - std::exp(2.0 * double(k) * kappa));
        S += coef * Xk;
        Xk = X * Xk;
    }
    return D * S;
}

/// Trigonometric R-matrix R^q(x) = R^q(0) sum_r Pi_q^(r) prod_{s<r} (1 - x q^{2s-2l1-2l2})/(1 - x q^{2l1+2l2-2s}).
inline Matrix trig_r(const ModuleSpec& a, const ModuleSpec& b, int level, cplx x, cplx kappa)
{
    Projectors pr = projectors({a, b}, level, kappa);
    const cplx L = a.lambda + b.lambda;
    Matrix S = Matrix::Zero(pr.P[0].rows(), pr.P[0].cols());
    for (int r = 0; r <= level; ++r) {
        if (pr.P[r].norm() == 0.0) continue;
        cplx c = 1.0;
        for (int s = 0; s < r; ++s) {
            cplx den = 1.0 - x * std::exp(kappa * (2.0 * L - 2.0 * double(s)));
            if (std::abs(den) < r_pole_margin) throw Error(Error::Kind::pole, "trig_r: x at a pole");
            c *= (1.0 - x * std::exp(kappa * (2.0 * double(s) - 2.0 * L))) / den;
        }
        S += c * pr.P[r];
    }
    return trig_r0(a, b, level, kappa) * S;
}

struct Factorized {
    Matrix M;                     // compression to admissible indices
    double preservation = 0.0;    // max |R(admissible, non-admissible)| / max |R|
};

/// Compress an operator on the Verma weight space to the irreducible quotient.
inline Factorized factor_to_irreducible(const Matrix& R, const std::vector<ModuleSpec>& irreducible, int level)
{
    std::vector<ModuleSpec> verma = irreducible;
    for (auto& s : verma) s.kind = ModuleKind::verma;
    WeightBasis V(verma, level), L(irreducible, level);
    if (R.rows() != V.dim() || R.cols() != V.dim()) throw Error(Error::Kind::domain, "factor_to_irreducible: shape");
    Factorized out;
    out.M.resize(L.dim(), L.dim());
    const double scale = std::max(R.cwiseAbs().maxCoeff(), 1e-300);
    for (int i = 0; i < V.dim(); ++i) {
        int li = L.find(V.indices[i]);
        for (int j = 0; j < V.dim(); ++j) {
            int lj = L.find(V.indices[j]);
            if (li >= 0 && lj >= 0) out.M(li, lj) = R(i, j);
            if (li >= 0 && lj < 0) out.preservation = std::max(out.preservation, std::abs(R(i, j)) / scale);
        }
    }
    if (out.preservation > 1e-9)
        throw Error(Error::Kind::domain, "factor_to_irreducible: S(x)V + V(x)S is not preserved");
    return out;
}

/// Two-factor operator family, indexed by the level of the pair.
using PairOperator = std::function<Matrix(int)>;

/// Embed an operator on factors (i, j) (in that order) into the n-fold weight space B.
inline Matrix embed(const PairOperator& R2, int i, int j, const WeightBasis& B)
{
    Matrix M = Matrix::Zero(B.dim(), B.dim());
    std::map<int, std::pair<WeightBasis, Matrix>> cache;
    for (int c = 0; c < B.dim(); ++c) {
        const auto& idx = B.indices[c];
        const int r = idx[i] + idx[j];
        auto it = cache.find(r);
        if (it == cache.end()) it = cache.emplace(r, std::make_pair(WeightBasis({B.specs[i], B.specs[j]}, r), R2(r))).first;
        const auto& [pb, pm] = it->second;
        const int col = pb.find({idx[i], idx[j]});
        for (int row = 0; row < pb.dim(); ++row) {
            if (pm(row, col) == 0.0) continue;
            MultiIndex t = idx;
            t[i] = pb.indices[row][0];
            t[j] = pb.indices[row][1];
            const int tr = B.find(t);
            if (tr >= 0) M(tr, c) += pm(row, col);
        }
    }
    return M;
}

inline Matrix embed_rational(int i, int j, cplx x, const WeightBasis& B)
{
    return embed([&](int r) { return rational_r(B.specs[i], B.specs[j], r, x); }, i, j, B);
}

/// K_m(z) = R_{m,m-1}(z_m-z_{m-1}+p)...R_{m,1}(z_m-z_1+p) e^{-mu h_m} R_{m,n}(z_m-z_n)...R_{m,m+1}(z_m-z_{m+1}).
/// m is 0-based.
inline Matrix qkz_operator(int m, const Params& P, const std::vector<ModuleSpec>& specs)
{
    WeightBasis B(specs, P.l);
    Matrix K = Matrix::Identity(B.dim(), B.dim());
    for (int k = m - 1; k >= 0; --k) K = K * embed_rational(m, k, P.z[m] - P.z[k] + P.p, B);
    K = K * exp_h_factor(B, m, P.mu).M;
    for (int k = P.n - 1; k > m; --k) K = K * embed_rational(m, k, P.z[m] - P.z[k], B);
    return K;
}

inline Params shifted(const Params& P, int m)
{
    Params Q = P;
    Q.z[m] += P.p;
    return Q;
}

/// max over pairs of ||K_m(z+p e_k) K_k(z) - K_k(z+p e_m) K_m(z)|| / ||K_m(z+p e_k) K_k(z)||.
inline double check_compatibility(const Params& P, const std::vector<ModuleSpec>& specs)
{
    double worst = 0.0;
    for (int m = 0; m < P.n; ++m)
        for (int k = m + 1; k < P.n; ++k) {
            Matrix lhs = qkz_operator(m, shifted(P, k), specs) * qkz_operator(k, P, specs);
            Matrix rhs = qkz_operator(k, shifted(P, m), specs) * qkz_operator(m, P, specs);
            worst = std::max(worst, (lhs - rhs).norm() / std::max(lhs.norm(), 1e-300));
        }
    return worst;
}

struct Transition {
    std::vector<MultiIndex> basis;  // labels l (power on module j is l_j), lexicographic
    Matrix sampled;                 // change of basis from sigma' to sigma
    Matrix predicted;               // P R^q acting in positions m, m+1
    double rel_err = 0.0;
    double residual = 0.0;
    double condition = 1.0;
};

namespace detail {

inline Matrix sampled_basis(const std::vector<int>& sigma, const std::vector<MultiIndex>& basis, const std::vector<CVec>& pts,
                            const Params& P)
{
    Matrix A(pts.size(), basis.size());
    for (std::size_t r = 0; r < pts.size(); ++r)
        for (std::size_t c = 0; c < basis.size(); ++c)
            A(r, c) = weight_coefficient(basis[c], P.lambda, P.p) * eval_W_sigma(sigma, basis[c], pts[r], P.z, P.lambda, P.p);
    return A;
}

} // namespace detail

/// Change of basis between {c_l W^sigma_l} and {c_l W^sigma'_l}, sigma' = sigma o (m, m+1), m 0-based,
/// compared with P R^q(e^{2 pi i (z_{sigma(m+1)} - z_{sigma(m)})/p}).
inline Transition transition_matrix(const std::vector<int>& sigma, int m, const Params& P,
                                    const std::vector<ModuleSpec>& specs, std::uint64_t seed = 11)
{
    const int n = P.n;
    if (m < 0 || m + 1 >= n) throw Error(Error::Kind::domain, "transition_matrix: m out of range");
    std::vector<int> sp = sigma;
    std::swap(sp[m], sp[m + 1]);
    WeightBasis B(specs, P.l);
    Transition out;
    out.basis = B.indices;
    const int d = B.dim();
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto pts = sample_points(3 * d + 2, P.l, P.z, P.lambda, P.p, seed + 1000 * attempt);
        Matrix A = detail::sampled_basis(sigma, out.basis, pts, P);
        Matrix Bs = detail::sampled_basis(sp, out.basis, pts, P);
        auto ls = solve_sampled(A, Bs);
        out.sampled = ls.X;
        out.residual = ls.residual;
        out.condition = ls.condition;
        if (ls.condition < sampling_condition_limit) break;
        if (attempt == 1) throw Error(Error::Kind::conditioning, "transition_matrix: sampling matrix ill-conditioned");
    }

    const ModuleSpec& first = specs[sigma[m + 1]];
    const ModuleSpec& second = specs[sigma[m]];
    const cplx x = std::exp(2.0 * pi * I * (P.z[sigma[m + 1]] - P.z[sigma[m]]) / P.p);
    std::map<int, std::pair<WeightBasis, Matrix>> cache;
    out.predicted = Matrix::Zero(d, d);
    for (int c = 0; c < d; ++c) {
        const auto& lab = out.basis[c];
        MultiIndex a(n);
        for (int i = 0; i < n; ++i) a[i] = lab[sp[i]];
        const int r = a[m] + a[m + 1];
        auto it = cache.find(r);
        if (it == cache.end())
            it = cache.emplace(r, std::make_pair(WeightBasis({first, second}, r), trig_r(first, second, r, x, P.kappa()))).first;
        const auto& [pb, R] = it->second;
        const int col = pb.find({a[m], a[m + 1]});
        for (int row = 0; row < pb.dim(); ++row) {
            MultiIndex b = a;
            b[m] = pb.indices[row][1];
            b[m + 1] = pb.indices[row][0];
            MultiIndex out_lab(n);
            for (int i = 0; i < n; ++i) out_lab[sigma[i]] = b[i];
            const int tr = B.find(out_lab);
            if (tr >= 0) out.predicted(tr, c) += R(row, col);
        }
    }
    out.rel_err = (out.sampled - out.predicted).norm() / std::max(out.predicted.norm(), 1e-300);
    return out;
}

} // namespace qkz
