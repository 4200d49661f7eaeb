#include "tsum/theta_kernel.hpp"

#include <algorithm>
#include <cmath>

#include "tsum/errors.hpp"

namespace tsum {

namespace {

const cplx kI{0.0, 1.0};

cplx exp2pii(cplx w) { return std::exp(2.0 * kPi * kI * w); }

ScaledComplex scaled_pow(cplx base, long long k) {
    if (k < 0) return ScaledComplex::one() / scaled_pow(base, -k);
    ScaledComplex acc = ScaledComplex::one();
    ScaledComplex b{base};
    while (k > 0) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

} // namespace

ModularPair::ModularPair(cplx s, cplx t) : sigma(s), tau(t) {
    if (!(t.imag() > 0.0)) throw DomainError("ModularPair: Im(tau) must be positive");
    if (q() == cplx(0.0, 0.0)) throw DomainError("ModularPair: q must be nonzero");
}

cplx ModularPair::q() const { return exp2pii(sigma); }
cplx ModularPair::p() const { return exp2pii(tau); }
cplx ModularPair::q_pow(cplx w) const { return exp2pii(sigma * w); }
cplx ModularPair::p_pow(cplx w) const { return exp2pii(tau * w); }

cplx pochhammer_inf(cplx a, cplx p, double tol) {
    if (!(tol > 0.0)) throw DomainError("pochhammer_inf: tol must be positive");
    const double ap = std::abs(p);
    if (ap >= 1.0) throw DomainError("pochhammer_inf: |p| must be < 1");
    if (a == cplx(0.0, 0.0)) return {1.0, 0.0};
    if (ap == 0.0) return 1.0 - a;

    // Tail bound: |prod_{n>=N}(1 - a p^n) - 1| <~ |a| |p|^N / (1 - |p|).
    const double aa = std::max(std::abs(a), 1.0);
    double n_est = std::log(tol * (1.0 - ap) / aa) / std::log(ap);
    int N = static_cast<int>(std::ceil(std::max(n_est, 1.0))) + 5;
    N = std::min(N, 100000);

    cplx result{1.0, 0.0};
    cplx apn = a;
    for (int n = 0; n < N; ++n) {
        result *= (1.0 - apn);
        apn *= p;
    }
    return result;
}

cplx theta_short(cplx a, cplx p, double tol) {
    return theta_short_scaled(a, p, tol).value();
}

ScaledComplex theta_short_scaled(cplx a, cplx p, double tol) {
    if (a == cplx(0.0, 0.0)) throw DomainError("theta_short: a must be nonzero");
    const double ap = std::abs(p);
    if (ap >= 1.0) throw DomainError("theta_short: |p| must be < 1");
    if (ap == 0.0) return ScaledComplex(1.0 - a);

    // Reduce a = p^{-s} ahat with ahat in the annulus |p|^(1/2) < |ahat| <=
    // |p|^(-1/2); then theta(a) = (-1)^s ahat^s p^{-s(s+1)/2} theta(ahat).
    const long long s = std::llround(std::log(std::abs(a)) / std::log(1.0 / ap));
    cplx ahat = a;
    ScaledComplex prefactor = ScaledComplex::one();
    if (s != 0) {
        ahat = (scaled_pow(p, s) * ScaledComplex(a)).value();
        prefactor = scaled_pow(ahat, s) / scaled_pow(p, s * (s + 1) / 2);
        if (s % 2 != 0) prefactor = -prefactor;
    }
    const cplx core = pochhammer_inf(ahat, p, tol) * pochhammer_inf(p / ahat, p, tol);
    return prefactor * ScaledComplex(core);
}

namespace {

cplx theta1_series(cplx u, const ModularPair& mp, double tol) {
    // -i sum_k (-1)^k p^{(2k+1)^2/8} q^{(k+1/2)u}, paired as k and -k-1.
    cplx sum{0.0, 0.0};
    double max_mag = 0.0;
    const int k_max = 4000;
    for (int k = 0; k <= k_max; ++k) {
        const double half = k + 0.5;
        const cplx pk = mp.p_pow(0.5 * (2 * k + 1) * (2 * k + 1) / 4.0);
        const cplx qp = mp.q_pow(half * u);
        const cplx qm = mp.q_pow(-half * u);
        cplx term = pk * (qp - qm);
        if (k % 2 == 1) term = -term;
        sum += term;
        const double mag = std::abs(pk) * std::max(std::abs(qp), std::abs(qm));
        max_mag = std::max(max_mag, mag);
        // Gaussian decay of p^{(2k+1)^2/8} dominates the q-growth once the
        // per-step ratio falls; two consecutive small bounds end the sum.
        if (k >= 2 && mag < tol * max_mag) {
            const double next =
                std::abs(mp.p_pow(0.5 * (2 * k + 3) * (2 * k + 3) / 4.0)) *
                std::max(std::abs(mp.q_pow((k + 1.5) * u)), std::abs(mp.q_pow(-(k + 1.5) * u)));
            if (next < tol * max_mag) break;
        }
    }
    return -kI * sum;
}

cplx theta1_product(cplx u, const ModularPair& mp, double tol) {
    const cplx p = mp.p();
    const ScaledComplex theta = theta_short_scaled(mp.q_pow(u), p, tol);
    const cplx pref = kI * mp.p_pow(0.125) * mp.q_pow(-0.5 * u) * pochhammer_inf(p, p, tol);
    return (theta * pref).value();
}

} // namespace

cplx theta1(cplx u, const ModularPair& bases, Theta1Route route, double tol) {
    return route == Theta1Route::series ? theta1_series(u, bases, tol)
                                        : theta1_product(u, bases, tol);
}

ScaledComplex shifted_factorial(std::span<const cplx> ts, int n, cplx q, cplx p, double tol) {
    if (n < 0) throw DomainError("shifted_factorial: n must be >= 0");
    ScaledComplex prod = ScaledComplex::one();
    for (const cplx& t : ts) {
        if (t == cplx(0.0, 0.0)) throw DomainError("shifted_factorial: zero parameter");
        cplx tq = t;
        for (int j = 0; j < n; ++j) {
            prod *= theta_short_scaled(tq, p, tol);
            tq *= q;
        }
    }
    return prod;
}

ScaledComplex shifted_factorial_add(std::span<const cplx> us, int n, const ModularPair& bases,
                                    double tol) {
    if (n < 0) throw DomainError("shifted_factorial_add: n must be >= 0");
    ScaledComplex prod = ScaledComplex::one();
    for (const cplx& u : us) {
        for (int j = 0; j < n; ++j) {
            prod *= ScaledComplex(theta1(u + static_cast<double>(j), bases, Theta1Route::series, tol));
        }
    }
    return prod;
}

ModularPair psl2_act(const ModularPair& bases, const std::array<std::array<long, 2>, 2>& gamma) {
    const long a = gamma[0][0], b = gamma[0][1], c = gamma[1][0], d = gamma[1][1];
    if (a * d - b * c != 1) throw DomainError("psl2_act: gamma must have determinant 1");
    const cplx den = static_cast<double>(c) * bases.tau + static_cast<double>(d);
    const cplx tau2 = (static_cast<double>(a) * bases.tau + static_cast<double>(b)) / den;
    return ModularPair(bases.sigma / den, tau2);
}

} // namespace tsum
