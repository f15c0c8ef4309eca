#pragma once

#include <algorithm>
#include <functional>

#include "core.hpp"

namespace qkz {

/// Graph-like contour: a polyline through `vertices` (Im strictly increasing)
/// closed off by vertical rays going to -i inf from the first vertex and to +i inf from the last.
struct Contour {
    std::vector<cplx> vertices;

    static Contour line(double re, double half_height = 1.0)
    {
        return {{cplx(re, -half_height), cplx(re, half_height)}};
    }

    void validate() const
    {
        if (vertices.size() < 2) throw Error(Error::Kind::domain, "contour needs at least two vertices");
        for (std::size_t i = 1; i < vertices.size(); ++i)
            if (!(vertices[i].imag() > vertices[i - 1].imag()))
                throw Error(Error::Kind::domain, "contour vertices must have increasing imaginary part");
    }

    /// Real part of the curve at height y.
    double re_at(double y) const
    {
        if (y <= vertices.front().imag()) return vertices.front().real();
        if (y >= vertices.back().imag()) return vertices.back().real();
        for (std::size_t i = 1; i < vertices.size(); ++i)
            if (y <= vertices[i].imag()) {
                auto a = vertices[i - 1], b = vertices[i];
                double s = (y - a.imag()) / (b.imag() - a.imag());
                return a.real() + s * (b.real() - a.real());
            }
        return vertices.back().real();
    }

    /// > 0 when x lies to the right of the curve.
    double side(cplx x) const { return x.real() - re_at(x.imag()); }

    double distance(cplx x) const;
};

inline double segment_distance(cplx x, cplx a, cplx b)
{
    cplx d = b - a;
    double s = std::norm(d) > 0.0 ? std::clamp(((x - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0) : 0.0;
    return std::abs(x - (a + s * d));
}

inline double Contour::distance(cplx x) const
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < vertices.size(); ++i) best = std::min(best, segment_distance(x, vertices[i - 1], vertices[i]));
    auto lo = vertices.front(), hi = vertices.back();
    best = std::min(best, x.imag() <= lo.imag() ? std::abs(x.real() - lo.real()) : std::abs(x - lo));
    best = std::min(best, x.imag() >= hi.imag() ? std::abs(x.real() - hi.real()) : std::abs(x - hi));
    return best;
}

/// The curve C_u: imaginary axis below height A and above (3n+2)A, the vertical piece
/// Re t = u_m on [(3m-1)A, (3m+1)A] for m = 1..n, straight connectors in between.
inline Contour build_curve(const std::vector<double>& u, double A)
{
    if (!(A > 0.0)) throw Error(Error::Kind::domain, "build_curve: A must be positive");
    const int n = static_cast<int>(u.size());
    Contour c;
    c.vertices.push_back(cplx(0.0, A));
    for (int m = 1; m <= n; ++m) {
        c.vertices.push_back(cplx(u[m - 1], (3 * m - 1) * A));
        c.vertices.push_back(cplx(u[m - 1], (3 * m + 1) * A));
    }
    c.vertices.push_back(cplx(0.0, (3 * n + 2) * A));
    return c;
}

/// Piecewise linear graph curve keeping every point of `left` on its left and every point of
/// `right` on its right with the given clearance; cones around each point, Re t = base far away.
/// Steeper cones and smaller clearances are tried in turn. Throws if the families cannot be separated.
inline Contour separating_curve(const CVec& left, const CVec& right, double base = 0.0, double clearance = 0.3)
{
    for (double slope : {0.8, 2.0, 5.0})
    for (double c = clearance; c >= 0.02; c *= 0.5) {
        auto lenv = [&](double y) {
            double g = -std::numeric_limits<double>::infinity();
            for (auto b : left) g = std::max(g, b.real() + c - slope * std::abs(y - b.imag()));
            return g;
        };
        auto renv = [&](double y) {
            double g = std::numeric_limits<double>::infinity();
            for (auto a : right) g = std::min(g, a.real() - c + slope * std::abs(y - a.imag()));
            return g;
        };
        auto g = [&](double y) { return std::min(std::max(base, lenv(y)), renv(y)); };

        bool ok = true;
        for (auto b : left) ok = ok && g(b.imag()) >= b.real() + 0.5 * c;
        for (auto a : right) ok = ok && g(a.imag()) <= a.real() - 0.5 * c;
        if (!ok) continue;

        // candidate breakpoints: apexes and pairwise intersections of cone edges and the base line
        struct Line { double a, b; };  // x = a + b y
        std::vector<Line> lines{{base, 0.0}};
        std::vector<double> ys;
        for (auto v : left) {
            lines.push_back({v.real() + c - slope * v.imag(), slope});
            lines.push_back({v.real() + c + slope * v.imag(), -slope});
            ys.push_back(v.imag());
        }
        for (auto v : right) {
            lines.push_back({v.real() - c - slope * v.imag(), slope});
            lines.push_back({v.real() - c + slope * v.imag(), -slope});
            ys.push_back(v.imag());
        }
        for (std::size_t i = 0; i < lines.size(); ++i)
            for (std::size_t j = i + 1; j < lines.size(); ++j)
                if (lines[i].b != lines[j].b) ys.push_back((lines[j].a - lines[i].a) / (lines[i].b - lines[j].b));
        double lo = 0.0, hi = 0.0;
        for (auto v : left) {
            double reach = std::abs(v.real() + c - base) / slope;
            lo = std::min(lo, v.imag() - reach);
            hi = std::max(hi, v.imag() + reach);
        }
        for (auto v : right) {
            double reach = std::abs(v.real() - c - base) / slope;
            lo = std::min(lo, v.imag() - reach);
            hi = std::max(hi, v.imag() + reach);
        }
        lo -= 1.0;
        hi += 1.0;
        ys.push_back(lo);
        ys.push_back(hi);
        std::erase_if(ys, [&](double y) { return y < lo || y > hi; });
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end(), [](double a, double b) { return b - a < 1e-9; }), ys.end());

        Contour out;
        for (double y : ys) {
            cplx v(g(y), y);
            if (out.vertices.size() >= 2) {
                cplx a = out.vertices[out.vertices.size() - 2], b = out.vertices.back();
                if (std::abs(((b - a) * std::conj(v - a)).imag()) < 1e-12 * std::abs(v - a) * std::abs(b - a)) {
                    out.vertices.back() = v;
                    continue;
                }
            }
            out.vertices.push_back(v);
        }
        return out;
    }
    throw Error(Error::Kind::domain, "separating_curve: pole families overlap");
}

/// Quadrature nodes t with weights w for the integral of dt along a path.
struct Nodes {
    std::vector<cplx> t;
    std::vector<cplx> w;
    double reach = 0.0;  // longest ray length used

    void add(cplx tt, cplx ww)
    {
        t.push_back(tt);
        w.push_back(ww);
    }
    std::size_t size() const { return t.size(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int q)
{
    std::vector<double> x(q), w(q);
    for (int i = 0; i < q; ++i) {
        double r = std::cos(pi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = r;
            for (int k = 2; k <= q; ++k) {
                double p2 = ((2.0 * k - 1.0) * r * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (q == 1) p0 = 1.0;
            dp = q * (r * p1 - p0) / (r * r - 1.0);
            double dr = p1 / dp;
            r -= dr;
            if (std::abs(dr) < 1e-16) break;
        }
        x[i] = r;
        w[i] = 2.0 / ((1.0 - r * r) * dp * dp);
    }
    return {x, w};
}

inline void add_panel(Nodes& out, cplx a, cplx b, const std::pair<std::vector<double>, std::vector<double>>& gl)
{
    cplx h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (std::size_t i = 0; i < gl.first.size(); ++i) out.add(c + h * gl.first[i], h * gl.second[i]);
}

inline double pole_distance(cplx a, cplx b, const CVec& poles)
{
    double d = std::numeric_limits<double>::infinity();
    for (auto x : poles) d = std::min(d, segment_distance(x, a, b));
    return d;
}

struct QuadOptions {
    int order = 8;                // Gauss-Legendre points per panel; circles use 4 * order
    double hmax = 1.0;            // longest finite panel
    double ray_hmax = 4.0;        // longest ray panel
    double tail_tol = 1e-16;      // ray truncation relative to the largest panel contribution
    double cap = 1e3;             // rays stop with a convergence error beyond cap * scale
    double tol = 1e-10;           // requested relative accuracy of order doubling
    int max_order = 32;
    int threads = 1;
};

inline constexpr double contour_pole_margin = 1e-7;

/// Graded panels along the finite part, geometric panels along both rays truncated once
/// env(t) * h falls below tail_tol times the largest panel weight. env must be a cheap
/// nonnegative bound for the single-variable integrand.
inline Nodes contour_nodes(const Contour& C, const CVec& poles, const QuadOptions& o,
                           const std::function<double(cplx)>& env, double scale = 1.0)
{
    C.validate();
    const auto gl = gauss_legendre(o.order);
    Nodes out;
    double peak = 0.0;

    std::function<void(cplx, cplx, int)> finite = [&](cplx a, cplx b, int depth) {
        double len = std::abs(b - a), d = pole_distance(a, b, poles);
        if (d < contour_pole_margin) throw Error(Error::Kind::pole, "contour passes through a pole of the integrand");
        if ((len <= o.hmax && len <= d) || depth > 60) {
            add_panel(out, a, b, gl);
            peak = std::max(peak, env(0.5 * (a + b)) * len);
            return;
        }
        cplx m = 0.5 * (a + b);
        finite(a, m, depth + 1);
        finite(m, b, depth + 1);
    };
    for (std::size_t i = 1; i < C.vertices.size(); ++i) finite(C.vertices[i - 1], C.vertices[i], 0);

    for (int dir : {-1, +1}) {
        cplx a = dir < 0 ? C.vertices.front() : C.vertices.back();
        const cplx start = a;
        double h = std::min(o.hmax, 0.5);
        int quiet = 0;
        while (true) {
            double dfront = pole_distance(a, a + cplx(0.0, dir * h), poles);
            if (dfront < contour_pole_margin) throw Error(Error::Kind::pole, "ray passes through a pole of the integrand");
            double step = std::min(h, std::max(dfront, 1e-3));
            cplx b = a + cplx(0.0, dir * step);
            // the lower ray runs upward, from -i inf to the first vertex
            if (dir < 0)
                add_panel(out, b, a, gl);
            else
                add_panel(out, a, b, gl);
            double e = env(0.5 * (a + b)) * step;
            peak = std::max(peak, e);
            a = b;
            quiet = (e < o.tail_tol * peak) ? quiet + 1 : 0;
            if (quiet >= 3 && std::abs(a - start) > 2.0) break;
            if (std::abs(a - start) > o.cap * scale)
                throw Error(Error::Kind::convergence, "integrand does not decay along the contour ray");
            h = std::min(h * 1.3, o.ray_hmax);
        }
        out.reach = std::max(out.reach, std::abs(a - start));
    }
    return out;
}

/// Trapezoid rule for the counterclockwise circle integral of dt.
inline Nodes circle_nodes(cplx center, double radius, int count)
{
    Nodes out;
    for (int k = 0; k < count; ++k) {
        cplx e = std::exp(2.0 * pi * I * (k + 0.5) / double(count));
        out.add(center + radius * e, 2.0 * pi * I * radius * e / double(count));
    }
    return out;
}

} // namespace qkz
