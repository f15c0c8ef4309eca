// One line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "qkz/qkz.hpp"

using namespace qkz;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, double limit_s, const std::function<Outcome()>& body)
{
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = o.pass && dt < limit_s;
    if (!ok) ++failures;
    std::printf("[%s] %2d %s: %s; %.2f s (limit %.0f s)\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), dt, limit_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Params desk_n2()
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

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

} // namespace

int main()
{
    // 1
    run(1, "special functions", 1.0, [] {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> U(-4.0, 4.0), N(-4.0, -0.2);
        double e_psi = 0.0, e_ref = 0.0;
        for (int i = 0; i < 20; ++i) {
            cplx p(N(rng), U(rng));
            e_psi = std::max(e_psi, rel(psi_k(0, p), p / pi));
        }
        for (int i = 0; i < 20; ++i) {
            cplx w(U(rng), U(rng) * 0.5);
            cplx lhs = std::exp(lgamma_c(w) + lgamma_c(1.0 - w));
            e_ref = std::max(e_ref, rel(lhs, pi / std::sin(pi * w)));
        }
        return Outcome{e_psi < 1e-12 && e_ref < 1e-12, fmt("psi_0 = p/pi rel %.1e, reflection rel %.1e (tol 1e-12)", e_psi, e_ref)};
    });

    // 2
    run(2, "representation core", 10.0, [] {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> U(-1.5, 1.5), V(0.2, 0.8);
        double worst = 0.0, worst_proj = 0.0;
        for (int draw = 0; draw < 10; ++draw) {
            for (int n = 1; n <= 3; ++n) {
                // Im lambda > 0 keeps every tensor product weight space semisimple
                CVec la(n);
                for (auto& v : la) v = cplx(U(rng), V(rng));
                // keep q away from roots of unity of order <= 2(l+1)
                cplx kappa = I * pi / cplx(-3.3 + 0.1 * U(rng), 0.2 * U(rng));
                for (int l = 1; l <= 4; ++l) {
                    for (cplx k : {cplx(0.0), kappa}) {
                        WeightBasis b(verma_specs(la), l);
                        Matrix ef = act_eq(act_fq(b, k).codomain, k).M * act_fq(b, k).M;
                        Matrix fe = act_fq(act_eq(b, k).codomain, k).M * act_eq(b, k).M;
                        // [e, f] = [2h]_q
                        cplx hw = b.total_weight();
                        Matrix rhs = Matrix::Identity(b.dim(), b.dim()) * qnum(2.0 * hw, k);
                        worst = std::max(worst, (ef - fe - rhs).norm() / std::max(rhs.norm(), 1.0));
                        // q^h e q^-h = q e
                        Matrix E = act_eq(b, k).M;
                        Matrix conj = act_qh(act_eq(b, k).codomain, k).M * E * act_qh(b, k, -1.0).M;
                        worst = std::max(worst, (conj - std::exp(k) * E).norm() / std::max(E.norm(), 1.0));
                    }
                    if (n == 2)
                        for (cplx k : {cplx(0.0), kappa}) {
                            Projectors pr = projectors(verma_specs(la), l, k);
                            Matrix sum = Matrix::Zero(pr.P[0].rows(), pr.P[0].cols());
                            for (auto& P : pr.P) {
                                sum += P;
                                worst_proj = std::max(worst_proj, (P * P - P).norm() / std::max(P.norm(), 1.0));
                            }
                            worst_proj = std::max(worst_proj, (sum - Matrix::Identity(sum.rows(), sum.cols())).norm());
                        }
                }
            }
        }
        return Outcome{worst < 1e-10 && worst_proj < 1e-10,
                       fmt("relations %.1e, projectors %.1e (tol 1e-10)", worst, worst_proj)};
    });

    // 3
    run(3, "R-matrix on L_{1/2} x V", 10.0, [] {
        const cplx la2(-0.7, 0.35), kappa = I * pi / cplx(-3.3, 0.0);
        double worst = 0.0;
        for (int l = 1; l <= 4; ++l) {
            ModuleSpec v1{0.5, ModuleKind::verma}, l1{0.5, ModuleKind::irreducible}, v2{la2, ModuleKind::verma};
            for (cplx x : {cplx(0.37, 0.2), cplx(-1.3, 0.8)}) {
                auto fr = factor_to_irreducible(rational_r(v1, v2, l, x), {l1, v2}, l);
                Matrix Lr = rational_r(l1, v2, l, x);
                worst = std::max(worst, std::max(fr.preservation, (fr.M - Lr).norm() / Lr.norm()));
                cplx xq = std::exp(x);
                auto ft = factor_to_irreducible(trig_r(v1, v2, l, xq, kappa), {l1, v2}, l);
                Matrix Lt = trig_r(l1, v2, l, xq, kappa);
                worst = std::max(worst, std::max(ft.preservation, (ft.M - Lt).norm() / Lt.norm()));
            }
        }
        double inf = 0.0;
        for (int l = 1; l <= 4; ++l) {
            Matrix R = rational_r({cplx(-0.8, 0.3)}, {la2}, l, 1e6);
            inf = std::max(inf, (R - Matrix::Identity(R.rows(), R.cols())).norm());
        }
        return Outcome{worst < 1e-9 && inf < 1e-4, fmt("factorization %.1e (tol 1e-9), |R(1e6) - Id| %.1e (tol 1e-4)", worst, inf)};
    });

    // 4
    run(4, "qKZ flatness", 30.0, [] {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        double worst = 0.0;
        for (int n = 2; n <= 3; ++n)
            for (int l = 1; l <= 2; ++l)
                for (int draw = 0; draw < 3; ++draw) {
                    Params P;
                    P.n = n;
                    P.l = l;
                    P.p = {-3.0, 0.3 * U(rng)};
                    P.mu = {0.5, 1.0};
                    for (int i = 0; i < n; ++i) {
                        P.z.push_back({U(rng), U(rng)});
                        P.lambda.push_back({-0.8 + 0.3 * U(rng), 0.3 * U(rng)});
                    }
                    worst = std::max(worst, check_compatibility(P, verma_specs(P.lambda)));
                }
        return Outcome{worst < 1e-10, fmt("max residual %.1e (tol %.0e)", worst, 1e-10)};
    });

    // 5
    run(5, "hypergeometric solutions solve qKZ", 300.0, [] {
        Params P = desk_n2();
        QuadOptions o;
        o.tol = 1e-8;
        double worst = 0.0;
        for (int m = 0; m < 2; ++m)
            for (auto& idx : enumerate_indices(2, 1))
                worst = std::max(worst, verify_qkz(P, m, {Family::trigonometric, idx, {}}, o).residual);
        return Outcome{worst < 1e-5, fmt("max residual over m = 1, 2 and W in the basis %.1e (tol %.0e)", worst, 1e-5)};
    });

    // 6
    run(6, "determinant of J", 300.0, [] {
        QuadOptions o;
        o.tol = 1e-9;
        Params P1;
        P1.n = 1;
        P1.l = 1;
        P1.z = {{0.0, 0.1}};
        P1.lambda = {{-0.8, 0.3}};
        Params P2 = desk_n2();
        double e1 = rel(J_matrix(P1, trivial_cycle(Contour::line(0.0), 1), o).J.determinant(), det_closed_form(P1));
        double e2 = rel(J_matrix(P2, trivial_cycle(Contour::line(0.0), 2), o).J.determinant(), det_closed_form(P2));
        return Outcome{e1 < 1e-6 && e2 < 1e-6, fmt("n=1 rel %.1e, n=2 rel %.1e (tol 1e-6)", e1, e2)};
    });

    // 7
    run(7, "resonant triangularity and reduction", 900.0, [] {
        Params P;
        P.n = 2;
        P.l = 2;
        P.p = -3.3;
        P.mu = {0.5, 1.0};
        P.z = {{0.0, 6.0}, {0.0, 11.75}};
        P.lambda = {0.5, {-0.6, 0.25}};
        QuadOptions o;
        o.tol = 1e-9;
        JMatrix J = J_matrix_resonant(P, 0.25, 2.0, o);
        const double scale = J.J.cwiseAbs().maxCoeff();
        double off = 0.0;
        int diag = -1;
        for (std::size_t i = 0; i < J.rows.size(); ++i)
            for (std::size_t j = 0; j < J.cols.size(); ++j) {
                auto Bl = non_admissible_set(J.rows[i], P.lambda), Bm = non_admissible_set(J.cols[j], P.lambda);
                if (std::includes(Bm.begin(), Bm.end(), Bl.begin(), Bl.end()) && Bl != Bm)
                    off = std::max(off, std::abs(J.J(i, j)) / scale);
                if (J.rows[i] == MultiIndex{2, 0} && J.cols[j] == MultiIndex{2, 0}) diag = static_cast<int>(i);
            }
        // l' = 0 at Lambda' = (-3/2, Lambda_2), so the reduced pairing is 1
        cplx C = frakC(P.lambda, P.z, {0}, P.l, P.p, P.mu);
        double red = rel(J.J(diag, diag), C);
        return Outcome{off < 1e-5 && red < 1e-4,
                       fmt("off-admissible %.1e of scale (tol 1e-5), diagonal block vs C rel %.1e (tol 1e-4)", off, red)};
    });

    // 8
    run(8, "transition functions", 60.0, [] {
        Params P = desk_n2();
        double worst = 0.0;
        for (int l = 1; l <= 2; ++l) {
            P.l = l;
            worst = std::max(worst, transition_matrix({0, 1}, 0, P, verma_specs(P.lambda)).rel_err);
            worst = std::max(worst, transition_matrix({1, 0}, 0, P, verma_specs(P.lambda)).rel_err);
        }
        return Outcome{worst < 1e-7, fmt("max rel err %.1e (tol %.0e)", worst, 1e-7)};
    });

    // 9
    run(9, "asymptotics", 600.0, [] {
        Params P = desk_n2();
        QuadOptions o;
        o.tol = 1e-9;
        const double sep = 40.0 * std::abs(P.p);
        P.z = zone_points({}, 2, sep);
        double d1 = std::abs(asymptotic_check({}, {1, 0}, P, o).ratio - 1.0);
        P.z = zone_points({}, 2, 2.0 * sep);
        double d2 = std::abs(asymptotic_check({}, {1, 0}, P, o).ratio - 1.0);
        return Outcome{d1 < 0.05 && d2 < d1, fmt("|ratio - 1| = %.4f at 40|p|, %.4f at 80|p| (tol 0.05, decreasing)", d1, d2)};
    });

    // 10
    run(10, "Im mu = 0 singular solutions", 600.0, [] {
        Params P;
        P.n = 3;
        P.l = 1;
        P.p = -3.0;
        P.mu = 0.0;
        P.z = {{0.2, 0.1}, {-0.3, -0.4}, {0.1, 0.6}};
        P.lambda = {{-0.8, 0.3}, {-1.1, -0.2}, {-0.9, 0.1}};
        QuadOptions o;
        o.tol = 1e-9;
        auto ks = enumerate_indices(P.n - 1, P.l);
        WeightBasis B(verma_specs(P.lambda), P.l);
        Matrix S(B.dim(), ks.size());
        double worst = 0.0;
        for (std::size_t j = 0; j < ks.size(); ++j) {
            Solution s = solution_Psi(P, {Family::singular, ks[j], {}}, o);
            S.col(j) = s.psi;
            worst = std::max(worst, (act_e(B).M * s.psi).norm() / s.psi.norm());
        }
        Eigen::JacobiSVD<Matrix> svd(S);
        const auto& sv = svd.singularValues();
        double cond = sv(0) / sv(sv.size() - 1);
        return Outcome{worst < 1e-5 && cond < 1e8, fmt("|e Psi|/|Psi| %.1e (tol 1e-5), condition %.2f (limit 1e8)", worst, cond)};
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
