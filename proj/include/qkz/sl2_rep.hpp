#pragma once

#include <climits>
#include <map>
#include <vector>

#include "combinatorics.hpp"

namespace qkz {

enum class ModuleKind { verma, irreducible };

/// Highest weight module V_lambda or L_lambda. L_lambda equals V_lambda unless lambda is dominant.
struct ModuleSpec {
    cplx lambda{0.0, 0.0};
    ModuleKind kind = ModuleKind::verma;

    bool truncated() const { return kind == ModuleKind::irreducible && is_dominant(lambda); }
    int max_power() const { return truncated() ? twice(lambda) : INT_MAX; }
    bool admits(int k) const { return k >= 0 && k <= max_power(); }
};

inline std::vector<ModuleSpec> verma_specs(const CVec& lambda)
{
    std::vector<ModuleSpec> s;
    for (auto v : lambda) s.push_back({v, ModuleKind::verma});
    return s;
}

inline std::vector<ModuleSpec> irreducible_specs(const CVec& lambda)
{
    std::vector<ModuleSpec> s;
    for (auto v : lambda) s.push_back({v, ModuleKind::irreducible});
    return s;
}

/// Basis f^{l_1}v_1 (x) ... (x) f^{l_n}v_n of a weight space, lexicographic.
struct WeightBasis {
    std::vector<ModuleSpec> specs;
    int level = 0;
    std::vector<MultiIndex> indices;
    std::map<MultiIndex, int> position;

    WeightBasis() = default;
    WeightBasis(std::vector<ModuleSpec> s, int l) : specs(std::move(s)), level(l)
    {
        if (l < 0) return;
        for (auto& idx : enumerate_indices(static_cast<int>(specs.size()), l)) {
            bool ok = true;
            for (std::size_t i = 0; i < idx.size(); ++i) ok = ok && specs[i].admits(idx[i]);
            if (!ok) continue;
            position[idx] = static_cast<int>(indices.size());
            indices.push_back(idx);
        }
    }

    int dim() const { return static_cast<int>(indices.size()); }
    int n() const { return static_cast<int>(specs.size()); }
    int find(const MultiIndex& idx) const
    {
        auto it = position.find(idx);
        return it == position.end() ? -1 : it->second;
    }
    cplx total_weight() const
    {
        cplx w = -double(level);
        for (auto& s : specs) w += s.lambda;
        return w;
    }
};

/// Dense operator between two weight spaces.
struct LinearMap {
    WeightBasis domain;
    WeightBasis codomain;
    Matrix M;
};

/// Quantum number [x]_q for q = exp(kappa); kappa = 0 gives x.
inline cplx qnum(cplx x, cplx kappa)
{
    if (std::abs(kappa) == 0.0) return x;
    return std::sinh(kappa * x) / std::sinh(kappa);
}

namespace detail {

inline void check_root_of_unity(cplx kappa, int level)
{
    if (std::abs(kappa) == 0.0) return;
    // q^{2k} = 1 for some k <= level kills [k]_q and the R^q(0) denominators
    for (int k = 1; k <= std::max(level, 1); ++k)
        if (std::abs(1.0 - std::exp(2.0 * double(k) * kappa)) < 1e-10)
            throw Error(Error::Kind::domain, "q is a root of unity of order dividing " + std::to_string(2 * k));
}

// Coproduct factor for an operator acting at position m: q^{-h} on the left, q^{h} on the right.
inline cplx side_factor(const WeightBasis& b, const MultiIndex& idx, int m, cplx kappa)
{
    if (std::abs(kappa) == 0.0) return 1.0;
    cplx e = 0.0;
    for (int i = 0; i < m; ++i) e -= b.specs[i].lambda - double(idx[i]);
    for (int i = m + 1; i < b.n(); ++i) e += b.specs[i].lambda - double(idx[i]);
    return std::exp(kappa * e);
}

} // namespace detail

/// f (or f_q) from level l to level l+1; non-admissible targets are dropped.
inline LinearMap act_fq(const WeightBasis& b, cplx kappa)
{
    detail::check_root_of_unity(kappa, b.level);
    WeightBasis up(b.specs, b.level + 1);
    Matrix M = Matrix::Zero(up.dim(), b.dim());
    for (int j = 0; j < b.dim(); ++j) {
        const auto& idx = b.indices[j];
        for (int m = 0; m < b.n(); ++m) {
            MultiIndex t = idx;
            t[m] += 1;
            int r = up.find(t);
            if (r < 0) continue;
            M(r, j) += detail::side_factor(b, idx, m, kappa);
        }
    }
    return {b, up, M};
}

/// e (or e_q) from level l to level l-1.
inline LinearMap act_eq(const WeightBasis& b, cplx kappa)
{
    detail::check_root_of_unity(kappa, b.level);
    WeightBasis down(b.specs, b.level - 1);
    Matrix M = Matrix::Zero(down.dim(), b.dim());
    for (int j = 0; j < b.dim(); ++j) {
        const auto& idx = b.indices[j];
        for (int m = 0; m < b.n(); ++m) {
            const int k = idx[m];
            if (k == 0) continue;
            MultiIndex t = idx;
            t[m] -= 1;
            int r = down.find(t);
            if (r < 0) continue;
            cplx c = qnum(double(k), kappa) * qnum(2.0 * b.specs[m].lambda - double(k) + 1.0, kappa);
            M(r, j) += c * detail::side_factor(b, idx, m, kappa);
        }
    }
    return {b, down, M};
}

/// q^{s h}: diagonal with q^{s (sum_i lambda_i - l)}.
inline LinearMap act_qh(const WeightBasis& b, cplx kappa, double s = 1.0)
{
    cplx w = b.total_weight();
    Matrix M = Matrix::Identity(b.dim(), b.dim()) * std::exp(kappa * s * w);
    return {b, b, M};
}

inline LinearMap act_f(const WeightBasis& b) { return act_fq(b, 0.0); }
inline LinearMap act_e(const WeightBasis& b) { return act_eq(b, 0.0); }

/// h: diagonal with total weight.
inline LinearMap act_h(const WeightBasis& b)
{
    Matrix M = Matrix::Identity(b.dim(), b.dim()) * b.total_weight();
    return {b, b, M};
}

/// exp(-mu h_m): acts on factor m only.
inline LinearMap exp_h_factor(const WeightBasis& b, int m, cplx mu)
{
    Matrix M = Matrix::Zero(b.dim(), b.dim());
    for (int j = 0; j < b.dim(); ++j) M(j, j) = std::exp(-mu * (b.specs[m].lambda - double(b.indices[j][m])));
    return {b, b, M};
}

struct SingularVectors {
    Matrix vectors;           // orthonormal columns spanning ker e
    bool ambiguous = false;   // a singular value sits within 10x of the threshold
    double threshold = 0.0;
};

/// Kernel of e (kappa = 0) or e_q on the weight space b.
inline SingularVectors singular_vectors(const WeightBasis& b, cplx kappa = 0.0)
{
    SingularVectors out;
    if (b.level == 0 || b.dim() == 0) {
        out.vectors = Matrix::Identity(b.dim(), b.dim());
        return out;
    }
    LinearMap e = act_eq(b, kappa);
    if (e.M.rows() == 0) {
        out.vectors = Matrix::Identity(b.dim(), b.dim());
        return out;
    }
    Eigen::JacobiSVD<Matrix> svd(e.M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    out.threshold = 1e-10 * std::max(smax, 1e-300);
    int rank = 0;
    for (int i = 0; i < s.size(); ++i) {
        if (s(i) > out.threshold) ++rank;
        if (s(i) > out.threshold / 10.0 && s(i) < out.threshold * 10.0) out.ambiguous = true;
    }
    out.vectors = svd.matrixV().rightCols(b.dim() - rank);
    return out;
}

struct Projectors {
    std::vector<Matrix> P;   // P[r] projects onto span f^{l-r} s_r
    double condition = 1.0;  // condition number of the change of basis
};

/// Projectors onto the summands of highest weight lambda_1 + lambda_2 - r in a two-factor weight space.
inline Projectors projectors(const std::vector<ModuleSpec>& specs, int l, cplx kappa = 0.0)
{
    if (specs.size() != 2) throw Error(Error::Kind::domain, "projectors need exactly two factors");
    WeightBasis target(specs, l);
    const int d = target.dim();
    Matrix cols(d, 0);
    std::vector<int> owner;
    for (int r = 0; r <= l; ++r) {
        WeightBasis br(specs, r);
        if (br.dim() == 0) continue;
        SingularVectors sv = singular_vectors(br, kappa);
        if (sv.ambiguous)
            throw Error(Error::Kind::conditioning, "ambiguous singular vector rank at level " + std::to_string(r));
        for (int c = 0; c < sv.vectors.cols(); ++c) {
            Vector v = sv.vectors.col(c);
            WeightBasis cur = br;
            for (int k = r; k < l; ++k) {
                LinearMap f = act_fq(cur, kappa);
                v = f.M * v;
                cur = f.codomain;
            }
            if (v.norm() < 1e-12)
                throw Error(Error::Kind::conditioning, "singular vector collapses under f at level " + std::to_string(r));
            cols.conservativeResize(d, cols.cols() + 1);
            cols.col(cols.cols() - 1) = v / v.norm();
            owner.push_back(r);
        }
    }
    if (cols.cols() != d)
        throw Error(Error::Kind::conditioning, "weight space does not decompose into highest weight summands");
    Projectors out;
    out.P.assign(l + 1, Matrix::Zero(d, d));
    if (d == 0) return out;
    Eigen::JacobiSVD<Matrix> svd(cols);
    const auto& s = svd.singularValues();
    out.condition = s(0) / s(s.size() - 1);
    if (!(out.condition < 1e12)) throw Error(Error::Kind::conditioning, "near-degenerate decomposition");
    Matrix inv = cols.inverse();
    for (int c = 0; c < d; ++c) out.P[owner[c]] += cols.col(c) * inv.row(c);
    return out;
}

} // namespace qkz
