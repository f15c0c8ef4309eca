#pragma once

#include <thread>

#include "contour.hpp"
#include "rmatrix.hpp"
#include "weightfn.hpp"

namespace qkz {

/// Cost guard: nodes^l (l!)^2 per term.
inline constexpr int max_cycle_level = 3;

/// Batch of integrals I(w_a, W_b) sharing one phase function.
/// W_indices are unpermuted labels; with sigma set, column b is W^sigma_b = W_{sigma b}(t, sigma z, sigma lambda).
struct IntegrandSpec {
    Params P;
    std::vector<MultiIndex> w_indices;
    Family family = Family::trigonometric;
    std::vector<int> sigma;
    std::vector<MultiIndex> W_indices;
};

class Integrand {
public:
    struct Site {
        cplx t, w, logphi;
        std::vector<cplx> rat, fam;
    };

    explicit Integrand(IntegrandSpec s) : spec_(std::move(s))
    {
        const Params& P = spec_.P;
        P.validate();
        if (spec_.family == Family::rational) throw Error(Error::Kind::domain, "W side must be trigonometric or singular");
        zW_ = P.z;
        laW_ = P.lambda;
        if (!spec_.sigma.empty()) {
            if (spec_.family != Family::trigonometric) throw Error(Error::Kind::domain, "sigma needs the trigonometric family");
            zW_ = permute(spec_.sigma, P.z);
            laW_ = permute(spec_.sigma, P.lambda);
        }
        nfam_ = spec_.family == Family::singular ? P.n - 1 : P.n;
        if (nfam_ < 1) throw Error(Error::Kind::domain, "singular weight functions need n >= 2");
        for (auto& idx : spec_.w_indices) {
            if (static_cast<int>(idx.size()) != P.n || qkz::level(idx) != P.l)
                throw Error(Error::Kind::domain, "rational index does not lie in Z^n_l");
            wblocks_.push_back(slot_blocks(idx));
            wconst_.push_back(family_constant(Family::rational, idx, P.z, P.lambda, P.p));
        }
        for (auto& idx0 : spec_.W_indices) {
            if (static_cast<int>(idx0.size()) != nfam_ || qkz::level(idx0) != P.l)
                throw Error(Error::Kind::domain, "trigonometric index has the wrong length or level");
            auto idx = spec_.sigma.empty() ? idx0 : permute(spec_.sigma, idx0);
            Wblocks_.push_back(slot_blocks(idx));
            Wconst_.push_back(family_constant(spec_.family, idx, zW_, laW_, P.p));
        }
    }

    const IntegrandSpec& spec() const { return spec_; }
    int level() const { return spec_.P.l; }
    int rows() const { return static_cast<int>(spec_.w_indices.size()); }
    int cols() const { return static_cast<int>(spec_.W_indices.size()); }

    Site site(cplx t, cplx w) const
    {
        const Params& P = spec_.P;
        Site s{t, w, P.mu * t / P.p, {}, {}};
        for (int i = 0; i < P.n; ++i)
            s.logphi += lgamma_c((t - P.z[i] + P.lambda[i]) / P.p) - lgamma_c((t - P.z[i] - P.lambda[i]) / P.p);
        s.rat.resize(P.n);
        for (int m = 0; m < P.n; ++m) s.rat[m] = rational_factor(m, t, P.z, P.lambda);
        s.fam.resize(nfam_);
        for (int m = 0; m < nfam_; ++m)
            s.fam[m] = std::exp(spec_.family == Family::singular ? sing_factor_log(m, t, zW_, laW_, P.p)
                                                                  : trig_factor_log(m, t, zW_, laW_, P.p));
        return s;
    }

    /// Crude bound for the one-variable integrand, used to truncate rays.
    double envelope(cplx t) const
    {
        Site s = site(t, 1.0);
        double a = 0.0, b = 0.0;
        for (auto v : s.rat) a = std::max(a, std::abs(v));
        for (auto v : s.fam) b = std::max(b, std::abs(v));
        return std::exp(s.logphi.real()) * a * b;
    }

    /// out += weight * Phi * w_a * W_b at the tuple of sites.
    void accumulate(const std::vector<const Site*>& s, cplx weight, Matrix& out) const
    {
        const int l = level();
        const cplx p = spec_.P.p;
        cplx lphi = 0.0;
        for (int a = 0; a < l; ++a) lphi += s[a]->logphi;
        thread_local std::vector<cplx> gr, gt, invR, invT;
        gr.assign(l * l, 1.0);
        gt.assign(l * l, 1.0);
        for (int a = 0; a < l; ++a)
            for (int b = a + 1; b < l; ++b) {
                cplx x = s[a]->t - s[b]->t;
                lphi += lgamma_c((x - 1.0) / p) - lgamma_c((x + 1.0) / p);
                gr[a * l + b] = (x - 1.0) / (x + 1.0);
                gt[a * l + b] = pair_factor(spec_.family, x, p);
            }
        const PermTable& tab = perm_table(l);
        const std::size_t np = tab.perms.size();
        invR.assign(np, 1.0);
        invT.assign(np, 1.0);
        for (std::size_t k = 0; k < np; ++k)
            for (auto [a, b] : tab.inversions[k]) {
                invR[k] *= gr[a * l + b];
                invT[k] *= gt[a * l + b];
            }
        const cplx base = weight * std::exp(lphi);
        thread_local std::vector<cplx> wv, Wv;
        wv.assign(rows(), 0.0);
        Wv.assign(cols(), 0.0);
        for (int i = 0; i < rows(); ++i) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < np; ++k) {
                cplx v = invR[k];
                for (int j = 0; j < l; ++j) v *= s[tab.perms[k][j]]->rat[wblocks_[i][j]];
                acc += v;
            }
            wv[i] = wconst_[i] * acc;
        }
        for (int i = 0; i < cols(); ++i) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < np; ++k) {
                cplx v = invT[k];
                for (int j = 0; j < l; ++j) v *= s[tab.perms[k][j]]->fam[Wblocks_[i][j]];
                acc += v;
            }
            Wv[i] = Wconst_[i] * acc;
        }
        for (int i = 0; i < rows(); ++i)
            for (int j = 0; j < cols(); ++j) out(i, j) += base * wv[i] * Wv[j];
    }

private:
    IntegrandSpec spec_;
    CVec zW_, laW_;
    int nfam_ = 0;
    std::vector<std::vector<int>> wblocks_, Wblocks_;
    CVec wconst_, Wconst_;
};

inline std::vector<Integrand::Site> make_sites(const Integrand& f, const Nodes& nodes)
{
    std::vector<Integrand::Site> out;
    out.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) out.push_back(f.site(nodes.t[i], nodes.w[i]));
    return out;
}

/// Tensor-product sum over one site list per variable. The first variable is split across
/// threads; partial sums are added in thread order.
inline Matrix integrate_tensor(const Integrand& f, const std::vector<const std::vector<Integrand::Site>*>& dims,
                               int threads = 1)
{
    const int l = static_cast<int>(dims.size());
    Matrix total = Matrix::Zero(f.rows(), f.cols());
    if (l == 0) {
        f.accumulate({}, 1.0, total);
        return total;
    }
    auto run = [&](std::size_t lo, std::size_t hi, Matrix& out) {
        std::vector<std::size_t> ix(l, 0);
        std::vector<const Integrand::Site*> tup(l);
        for (std::size_t i0 = lo; i0 < hi; ++i0) {
            ix.assign(l, 0);
            ix[0] = i0;
            while (true) {
                cplx w = 1.0;
                for (int a = 0; a < l; ++a) {
                    tup[a] = &(*dims[a])[ix[a]];
                    w *= tup[a]->w;
                }
                f.accumulate(tup, w, out);
                int a = l - 1;
                while (a > 0 && ++ix[a] == dims[a]->size()) ix[a--] = 0;
                if (a == 0) break;
            }
        }
    };
    const std::size_t N = dims[0]->size();
    const int T = std::max(1, std::min<int>(threads, static_cast<int>(N)));
    if (T == 1) {
        run(0, N, total);
        return total;
    }
    std::vector<Matrix> parts(T, Matrix::Zero(f.rows(), f.cols()));
    std::vector<std::thread> pool;
    for (int k = 0; k < T; ++k) pool.emplace_back(run, N * k / T, N * (k + 1) / T, std::ref(parts[k]));
    for (auto& th : pool) th.join();
    for (auto& m : parts) total += m;
    return total;
}

struct Circle {
    cplx center;
    double radius = 0.0;
};

/// One summand of a cycle: coefficient times the iterated integral with the first k variables
/// on the circles (plain counterclockwise integrals) and the rest on the cycle's contour.
struct CycleTerm {
    double coefficient = 1.0;
    MultiIndex k;
    std::vector<Circle> circles;
};

struct Cycle {
    Contour contour;
    std::vector<CycleTerm> terms;
};

inline Cycle trivial_cycle(const Contour& C, int n)
{
    return {C, {CycleTerm{1.0, MultiIndex(n, 0), {}}}};
}

/// Points the panel grading should respect for a variable on the contour.
inline CVec integrand_poles(const Params& P, const std::vector<Circle>& circles)
{
    CVec out;
    for (int i = 0; i < P.n; ++i) {
        for (int s = -2; s <= 2; ++s) out.push_back(P.z[i] + P.lambda[i] + double(s) * P.p);
        for (int s = 0; s <= 2; ++s)
            for (int j = 0; j < std::max(P.l, 1); ++j) {
                out.push_back(P.z[i] + P.lambda[i] - double(j) + double(s) * P.p);
                out.push_back(P.z[i] - P.lambda[i] + double(j) - double(s) * P.p);
            }
    }
    for (auto& c : circles)
        for (double sgn : {-1.0, 1.0})
            for (int k = 0; k < 8; ++k) out.push_back(c.center + sgn + c.radius * std::exp(I * (pi * k / 4.0)));
    return out;
}

inline double params_scale(const Params& P)
{
    double s = std::abs(P.p);
    for (int i = 0; i < P.n; ++i) s = std::max(s, std::abs(P.z[i]) + std::abs(P.lambda[i]));
    return s;
}

/// Circles for the chains of k-bar: chain slot j of module m sits at z_m + lambda_m - j.
/// The last slot gets min(0.3, half the distance to other poles and to the contour shifted by 0, +-1); each earlier
/// slot a quarter of the next one, so every circle encloses the chain pole of its predecessor.
inline std::vector<Circle> residue_circles(const Params& P, const MultiIndex& k, const Contour* C = nullptr)
{
    const int n = P.n;
    std::vector<Circle> out;
    std::vector<cplx> centers;
    std::vector<int> owner;
    for (int m = 0; m < n; ++m)
        for (int j = 0; j < k[m]; ++j) {
            centers.push_back(P.z[m] + P.lambda[m] - double(j));
            owner.push_back(m);
        }
    for (int m = 0; m < n; ++m) {
        if (k[m] == 0) continue;
        CVec foreign;
        for (int i = 0; i < n; ++i) {
            for (int s = 0; s <= 2; ++s) foreign.push_back(P.z[i] - P.lambda[i] - double(s) * P.p);
            for (int j = (i == m ? k[m] : 0); j <= P.l + 1; ++j) foreign.push_back(P.z[i] + P.lambda[i] - double(j));
            for (int s : {-2, -1, 1, 2}) foreign.push_back(P.z[i] + P.lambda[i] + double(s) * P.p);
        }
        for (std::size_t c = 0; c < centers.size(); ++c)
            if (owner[c] != m) {
                foreign.push_back(centers[c] + 1.0);
                foreign.push_back(centers[c] - 1.0);
            }
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (owner[c] != m) continue;
            for (auto x : foreign) d = std::min(d, std::abs(centers[c] - x));
            // contour variables t' give pair poles at t' +- 1
            if (C)
                for (double sh : {-1.0, 0.0, 1.0}) d = std::min(d, C->distance(centers[c] + sh));
        }
        const double rlast = std::min(0.3, 0.5 * d);
        if (!(rlast > 1e-6)) throw Error(Error::Kind::pole, "residue circle collapses onto another pole");
        for (std::size_t c = 0, j = 0; c < centers.size(); ++c)
            if (owner[c] == m) {
                out.push_back({centers[c], rlast * std::pow(4.0, double(int(j) - (k[m] - 1)))});
                ++j;
            }
    }
    return out;
}

/// Continuation cycle at (z, lambda) near Lambda: the curve C_u with u_m = min(-Re Lambda_m - eps, 0)
/// plus residue terms for all k-bar with k <= l and k_m <= 2 Re Lambda_m + 1, coefficient l!/(l-k)!.
/// Circles are centred on the chains of the actual lambda, so lambda may be perturbed off Lambda.
inline Cycle la_cont_cycle(const Params& P, const CVec& Lambda, double eps, double A)
{
    for (auto L : Lambda)
        if (!(A > 2.0 * std::abs(L))) throw Error(Error::Kind::domain, "la_cont_cycle: A must exceed 2|Lambda_m|");
    std::vector<double> u;
    for (auto L : Lambda) u.push_back(std::min(-L.real() - eps, 0.0));
    Cycle cyc{build_curve(u, A), {}};
    for (int k = 0; k <= P.l; ++k)
        for (auto& kb : enumerate_indices(P.n, k)) {
            bool ok = true;
            for (int m = 0; m < P.n; ++m) ok = ok && (kb[m] == 0 || kb[m] <= std::floor(2.0 * Lambda[m].real() + 1.0 + 1e-9));
            if (!ok) continue;
            cyc.terms.push_back({factorial(P.l) / factorial(P.l - k), kb, residue_circles(P, kb, &cyc.contour)});
        }
    return cyc;
}

struct IntegralResult {
    Matrix values;                   // rows: rational indices, columns: trigonometric indices
    double abs_error_estimate = 0.0;
    double truncation = 0.0;         // longest ray used
    long nodes = 0;                  // tuples summed at the final order
    int order = 0;
    std::vector<std::string> warnings;

    cplx value() const { return values(0, 0); }
};

/// Sum over the cycle terms at a fixed order.
inline IntegralResult integrate_cycle_fixed(const Cycle& cyc, const Integrand& f, const QuadOptions& o)
{
    const Params& P = f.spec().P;
    IntegralResult r;
    r.values = Matrix::Zero(f.rows(), f.cols());
    r.order = o.order;
    const double scale = params_scale(P);
    auto env = [&](cplx t) {
        try {
            return f.envelope(t);
        } catch (const Error&) {
            return 0.0;
        }
    };
    for (const auto& term : cyc.terms) {
        const int k = level(term.k);
        if (static_cast<int>(term.circles.size()) != k)
            throw Error(Error::Kind::domain, "cycle term: one circle per residue variable required");
        if (k > P.l) continue;
        std::vector<std::vector<Integrand::Site>> store;
        store.reserve(P.l + 1);
        for (auto& c : term.circles) store.push_back(make_sites(f, circle_nodes(c.center, c.radius, 4 * o.order)));
        if (k < P.l) {
            Nodes cn = contour_nodes(cyc.contour, integrand_poles(P, term.circles), o, env, scale);
            r.truncation = std::max(r.truncation, cn.reach);
            store.push_back(make_sites(f, cn));
        }
        std::vector<const std::vector<Integrand::Site>*> dims;
        long count = 1;
        for (int a = 0; a < k; ++a) dims.push_back(&store[a]);
        for (int a = k; a < P.l; ++a) dims.push_back(&store.back());
        for (auto* d : dims) count *= static_cast<long>(d->size());
        r.nodes += count;
        r.values += term.coefficient * integrate_tensor(f, dims, o.threads);
    }
    return r;
}

/// Order doubling from o.order until successive results agree to o.tol (relative to the largest entry).
inline IntegralResult integrate_cycle(const Cycle& cyc, const IntegrandSpec& spec, const QuadOptions& o)
{
    if (spec.P.l > max_cycle_level)
        throw Error(Error::Kind::domain, "cycle integrals limited to l <= " + std::to_string(max_cycle_level));
    Integrand f(spec);
    QuadOptions q = o;
    IntegralResult prev = integrate_cycle_fixed(cyc, f, q);
    if (spec.P.l == 0) return prev;
    while (true) {
        q.order *= 2;
        IntegralResult cur = integrate_cycle_fixed(cyc, f, q);
        double err = (cur.values - prev.values).cwiseAbs().maxCoeff();
        double sc = std::max(cur.values.cwiseAbs().maxCoeff(), 1e-300);
        cur.abs_error_estimate = err;
        if (!std::isfinite(sc) || !std::isfinite(err)) throw Error(Error::Kind::convergence, "non-finite quadrature value");
        if (err <= o.tol * sc) return cur;
        if (q.order >= o.max_order) {
            cur.warnings.push_back("order doubling stopped at " + std::to_string(q.order) + " with relative change " +
                                   std::to_string(err / sc));
            return cur;
        }
        prev = std::move(cur);
    }
}

/// Strict form of the region Re(z_i + lambda_i) < 0 < Re(z_i - lambda_i).
inline bool in_straight_region(const Params& P)
{
    for (int i = 0; i < P.n; ++i)
        if (!((P.z[i] + P.lambda[i]).real() < 0.0 && (P.z[i] - P.lambda[i]).real() > 0.0)) return false;
    return true;
}

/// Integral over Re t_i = 0; the region must hold.
inline IntegralResult straight_integral(const IntegrandSpec& spec, const QuadOptions& o)
{
    if (!in_straight_region(spec.P))
        throw Error(Error::Kind::domain, "straight contour requires Re(z_i + lambda_i) < 0 < Re(z_i - lambda_i)");
    return integrate_cycle(trivial_cycle(Contour::line(0.0), spec.P.n), spec, o);
}

/// Left and right pole families of the phase function, truncated a few periods beyond the origin.
inline std::pair<CVec, CVec> pole_families(const Params& P)
{
    CVec left, right;
    const double step = std::abs(P.p.real());
    for (int i = 0; i < P.n; ++i) {
        int S = static_cast<int>(std::ceil((std::abs(P.z[i].real()) + std::abs(P.lambda[i].real()) + P.l + 4.0) / step));
        S = std::min(S, 60);
        for (int s = 0; s <= S; ++s)
            for (int j = 0; j < std::max(P.l, 1); ++j) {
                left.push_back(P.z[i] + P.lambda[i] - double(j) + double(s) * P.p);
                right.push_back(P.z[i] - P.lambda[i] + double(j) - double(s) * P.p);
            }
    }
    return {left, right};
}

/// Re t = 0 inside the straight region, otherwise a graph curve separating the two families.
inline Contour auto_contour(const Params& P)
{
    if (in_straight_region(P)) return Contour::line(0.0);
    auto [left, right] = pole_families(P);
    return separating_curve(left, right, 0.0);
}

/// Iterated circle integrals (1/2 pi i)^k at a fixed point of the remaining variables, i.e. res_k f there.
inline Matrix multi_residue(const IntegrandSpec& spec, const std::vector<Circle>& circles, const CVec& rest,
                            int count = 64)
{
    Integrand f(spec);
    if (static_cast<int>(circles.size() + rest.size()) != spec.P.l)
        throw Error(Error::Kind::domain, "multi_residue: circles plus fixed variables must equal l");
    std::vector<std::vector<Integrand::Site>> store;
    for (auto& c : circles) store.push_back(make_sites(f, circle_nodes(c.center, c.radius, count)));
    for (auto t : rest) store.push_back({f.site(t, 1.0)});
    std::vector<const std::vector<Integrand::Site>*> dims;
    for (auto& s : store) dims.push_back(&s);
    return integrate_tensor(f, dims) / std::pow(2.0 * pi * I, double(circles.size()));
}

struct JMatrix {
    std::vector<MultiIndex> rows, cols;
    Matrix J;
    double abs_error = 0.0;
    std::vector<std::string> warnings;

    /// Restriction to Lambda-admissible rows and columns.
    JMatrix admissible(const CVec& Lambda) const
    {
        JMatrix out;
        std::vector<int> r, c;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (is_admissible(rows[i], Lambda)) {
                r.push_back(static_cast<int>(i));
                out.rows.push_back(rows[i]);
            }
        for (std::size_t j = 0; j < cols.size(); ++j)
            if (is_admissible(cols[j], Lambda)) {
                c.push_back(static_cast<int>(j));
                out.cols.push_back(cols[j]);
            }
        out.J.resize(r.size(), c.size());
        for (std::size_t i = 0; i < r.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j) out.J(i, j) = J(r[i], c[j]);
        out.abs_error = abs_error;
        out.warnings = warnings;
        return out;
    }
};

/// J_{l,m} = c_m(lambda) I(w_l, W^sigma_m) over the given cycle, all of Z^n_l.
inline JMatrix J_matrix(const Params& P, const Cycle& cyc, const QuadOptions& o, const std::vector<int>& sigma = {})
{
    JMatrix out;
    out.rows = out.cols = enumerate_indices(P.n, P.l);
    IntegrandSpec spec{P, out.rows, Family::trigonometric, sigma, out.cols};
    IntegralResult r = integrate_cycle(cyc, spec, o);
    out.J = r.values;
    for (std::size_t j = 0; j < out.cols.size(); ++j) {
        cplx c = weight_coefficient(out.cols[j], P.lambda, P.p);
        out.J.col(j) *= c;
    }
    out.abs_error = r.abs_error_estimate * (out.J.cwiseAbs().maxCoeff() / std::max(r.values.cwiseAbs().maxCoeff(), 1e-300));
    out.warnings = r.warnings;
    return out;
}

/// J at a resonant Lambda = P.lambda: the dominant coordinates are moved by +-delta and +-2 delta
/// on the continuation cycle, the symmetric averages combined by one Richardson step.
inline JMatrix J_matrix_resonant(const Params& P, double eps, double A, const QuadOptions& o, double delta = 1e-3)
{
    const CVec Lambda = P.lambda;
    const auto B = dominant_set(Lambda);
    auto at = [&](double d) {
        Params Q = P;
        for (int i : B) Q.lambda[i] += d;
        return J_matrix(Q, la_cont_cycle(Q, Lambda, eps, A), o);
    };
    if (B.empty()) return J_matrix(P, la_cont_cycle(P, Lambda, eps, A), o);
    JMatrix a1 = at(delta), a2 = at(-delta), b1 = at(2.0 * delta), b2 = at(-2.0 * delta);
    JMatrix out = a1;
    Matrix avg1 = 0.5 * (a1.J + a2.J), avg2 = 0.5 * (b1.J + b2.J);
    out.J = (4.0 * avg1 - avg2) / 3.0;
    out.abs_error = std::max({a1.abs_error, a2.abs_error, b1.abs_error, b2.abs_error}) +
                    (avg1 - avg2).cwiseAbs().maxCoeff() / 3.0 * 0.25;
    for (auto* x : {&a2, &b1, &b2}) out.warnings.insert(out.warnings.end(), x->warnings.begin(), x->warnings.end());
    return out;
}

/// Solution vector Psi = sum_l I(w_l, W) f^l v over the basis Z^n_l (Verma components).
struct Solution {
    std::vector<MultiIndex> basis;
    Vector psi;
    double abs_error = 0.0;
    std::vector<std::string> warnings;
};

inline Solution solution_Psi(const Params& P, const WeightFnSpec& W, const Cycle& cyc, const QuadOptions& o)
{
    Solution s;
    s.basis = enumerate_indices(P.n, P.l);
    IntegrandSpec spec{P, s.basis, W.family, W.sigma, {W.index}};
    IntegralResult r = integrate_cycle(cyc, spec, o);
    s.psi = r.values.col(0);
    s.abs_error = r.abs_error_estimate;
    s.warnings = r.warnings;
    return s;
}

inline Solution solution_Psi(const Params& P, const WeightFnSpec& W, const QuadOptions& o)
{
    return solution_Psi(P, W, trivial_cycle(auto_contour(P), P.n), o);
}

struct QkzCheck {
    double residual = 0.0;
    Vector shifted;    // Psi(z + p e_m)
    Vector predicted;  // e^{mu lambda_m} K_m(z) Psi(z)
    double abs_error = 0.0;
};

/// Psi(z + p e_m) against e^{mu lambda_m} K_m(z) Psi(z). The factor e^{mu lambda_m} is the gauge of the
/// raw integral; e^{-mu sum lambda_m z_m / p} Psi satisfies the equation without it. m is 0-based.
inline QkzCheck verify_qkz(const Params& P, int m, const WeightFnSpec& W, const QuadOptions& o)
{
    Solution a = solution_Psi(P, W, o);
    Solution b = solution_Psi(shifted(P, m), W, o);
    Matrix K = qkz_operator(m, P, verma_specs(P.lambda));
    QkzCheck c;
    c.shifted = b.psi;
    c.predicted = std::exp(P.mu * P.lambda[m]) * (K * a.psi);
    c.residual = (c.shifted - c.predicted).norm() / std::max(a.psi.norm(), 1e-300);
    c.abs_error = a.abs_error + b.abs_error;
    return c;
}

} // namespace qkz
