#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qkz {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Error raised by evaluation routines. The kind maps onto CLI exit codes.
class Error : public std::runtime_error {
public:
    enum class Kind { domain, pole, convergence, conditioning };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

inline std::string kind_name(Error::Kind k)
{
    switch (k) {
    case Error::Kind::domain: return "domain";
    case Error::Kind::pole: return "pole";
    case Error::Kind::convergence: return "convergence";
    case Error::Kind::conditioning: return "conditioning";
    }
    return "unknown";
}

/// Global parameter pack. q = exp(i pi / p) is derived, never set directly.
struct Params {
    int n = 1;
    int l = 0;
    cplx p{-3.0, 0.0};
    cplx mu{0.5, 1.0};
    CVec z;
    CVec lambda;

    cplx q() const { return std::exp(I * pi / p); }
    // q^x = exp(kappa x)
    cplx kappa() const { return I * pi / p; }

    void validate() const
    {
        if (n < 1) throw Error(Error::Kind::domain, "n must be >= 1");
        if (l < 0) throw Error(Error::Kind::domain, "l must be >= 0");
        if (static_cast<int>(z.size()) != n || static_cast<int>(lambda.size()) != n)
            throw Error(Error::Kind::domain, "z and lambda must have length n");
        if (!(p.real() < 0.0)) throw Error(Error::Kind::domain, "Re p must be negative");
        if (mu.imag() < 0.0 || mu.imag() >= 2.0 * pi)
            throw Error(Error::Kind::domain, "Im mu must lie in [0, 2pi)");
    }
};

/// Distance from x to the nearest point of the lattice p*Z (optionally restricted in sign).
/// sign: 0 all of Z, -1 negative integers only, +1 positive integers only.
inline double lattice_distance(cplx x, cplx p, int sign = 0)
{
    double k0 = (x * std::conj(p)).real() / std::norm(p);
    double best = std::numeric_limits<double>::infinity();
    for (double k : {std::floor(k0), std::ceil(k0), std::floor(k0) - 1.0, std::ceil(k0) + 1.0}) {
        if (sign < 0 && k > -1.0) k = -1.0;
        if (sign > 0 && k < 1.0) k = 1.0;
        best = std::min(best, std::abs(x - k * p));
    }
    return best;
}

inline double binomial(int n, int k)
{
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

inline double factorial(int n)
{
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

} // namespace qkz
