#ifndef TSUM_THETA_KERNEL_HPP
#define TSUM_THETA_KERNEL_HPP

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "tsum/scaled.hpp"

namespace tsum {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultTol = 1e-14;

// The pair of bases controlling all genus-1 functions: q = e^{2 pi i sigma},
// p = e^{2 pi i tau} with Im(tau) > 0. sigma and tau are primary; q-powers
// are always taken as exp(2 pi i sigma w), never via a complex logarithm of
// q, so quasi-periodicity relations hold exactly.
struct ModularPair {
    cplx sigma;
    cplx tau;

    ModularPair(cplx s, cplx t);

    cplx q() const;
    cplx p() const;
    // q^w = exp(2 pi i sigma w)
    cplx q_pow(cplx w) const;
    // p^w = exp(2 pi i tau w)
    cplx p_pow(cplx w) const;
};

// (a; p)_infinity = prod_{n>=0} (1 - a p^n), truncated so the dropped tail
// perturbs the result by less than tol relatively.
cplx pochhammer_inf(cplx a, cplx p, double tol = kDefaultTol);

// theta(a; p) = (a; p)_inf (p/a; p)_inf. Requires a != 0, |p| < 1.
cplx theta_short(cplx a, cplx p, double tol = kDefaultTol);

// Same value in scaled form. Reduces a into the annulus |p|^(1/2) < |a| <=
// |p|^(-1/2) through theta(p a) = -a^{-1} theta(a) before evaluating the
// products, so arguments many p-octaves away stay exact and representable.
ScaledComplex theta_short_scaled(cplx a, cplx p, double tol = kDefaultTol);

enum class Theta1Route { series, product };

// Jacobi theta_1 in the elliptic-numbers normalization:
//   [u] = -i sum_k (-1)^k p^{(2k+1)^2/8} q^{(k+1/2)u}
//       = i p^{1/8} q^{-u/2} (p;p)_inf theta(q^u; p).
// Both routes agree within combined truncation tolerance.
cplx theta1(cplx u, const ModularPair& bases, Theta1Route route = Theta1Route::series,
            double tol = kDefaultTol);

// theta(t_0,...,t_k; p; q)_n = prod_m prod_{j=0}^{n-1} theta(t_m q^j; p).
// n = 0 is the empty product. Zero parameters are a domain error.
ScaledComplex shifted_factorial(std::span<const cplx> ts, int n, cplx q, cplx p,
                                double tol = kDefaultTol);

// Additive form [u_0,...,u_k]_n = prod_m prod_{j=0}^{n-1} [u_m + j].
ScaledComplex shifted_factorial_add(std::span<const cplx> us, int n, const ModularPair& bases,
                                    double tol = kDefaultTol);

// PSL(2,Z) action tau -> (a tau + b)/(c tau + d), sigma -> sigma/(c tau + d).
ModularPair psl2_act(const ModularPair& bases, const std::array<std::array<long, 2>, 2>& gamma);

} // namespace tsum

#endif
