#ifndef TSUM_SCALED_HPP
#define TSUM_SCALED_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

namespace tsum {

using cplx = std::complex<double>;

// Complex number stored as m * 2^e with |m| kept near 1. Products of many
// theta values overflow double well before they lose relative precision;
// this keeps long products and their ratios representable.
struct ScaledComplex {
    cplx m{0.0, 0.0};
    std::int64_t e{0};

    ScaledComplex() = default;
    ScaledComplex(cplx mant, std::int64_t expo) : m(mant), e(expo) { normalize(); }
    explicit ScaledComplex(cplx v) : m(v), e(0) { normalize(); }
    explicit ScaledComplex(double v) : m(v, 0.0), e(0) { normalize(); }

    static ScaledComplex one() { return ScaledComplex(cplx(1.0, 0.0)); }
    static ScaledComplex zero() { return ScaledComplex(); }

    void normalize() {
        const double a = std::abs(m);
        if (a == 0.0 || !std::isfinite(a)) {
            e = 0;
            return;
        }
        int k = 0;
        (void)std::frexp(a, &k); // |m| in [2^(k-1), 2^k)
        if (k != 0) {
            m = cplx(std::ldexp(m.real(), -k), std::ldexp(m.imag(), -k));
            e += k;
        }
    }

    bool is_zero() const { return m == cplx(0.0, 0.0); }

    // log2 |value|; -inf for zero.
    double log2_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log2(std::abs(m)) + static_cast<double>(e);
    }

    // Collapses to a plain complex; overflows to inf / underflows to 0
    // exactly like the equivalent naive product would.
    cplx value() const {
        if (is_zero()) return {0.0, 0.0};
        if (e > 4000) {
            const double inf = std::numeric_limits<double>::infinity();
            return {m.real() * inf, m.imag() * inf};
        }
        if (e < -4000) return {0.0, 0.0};
        const double s = std::ldexp(1.0, static_cast<int>(e));
        return m * s;
    }

    friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
        return ScaledComplex(a.m * b.m, a.e + b.e);
    }
    friend ScaledComplex operator*(const ScaledComplex& a, cplx b) {
        return ScaledComplex(a.m * b, a.e);
    }
    friend ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
        return ScaledComplex(a.m / b.m, a.e - b.e);
    }
    ScaledComplex& operator*=(const ScaledComplex& o) { return *this = *this * o; }
    ScaledComplex& operator*=(cplx o) { return *this = *this * o; }
    ScaledComplex& operator/=(const ScaledComplex& o) { return *this = *this / o; }

    friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const std::int64_t d = a.e - b.e;
        if (d > 128) return a;
        if (d < -128) return b;
        if (d >= 0) {
            return ScaledComplex(a.m + cplx(std::ldexp(b.m.real(), static_cast<int>(-d)),
                                            std::ldexp(b.m.imag(), static_cast<int>(-d))),
                                 a.e);
        }
        return b + a;
    }
    friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) {
        return a + ScaledComplex(-b.m, b.e);
    }
    ScaledComplex operator-() const { return ScaledComplex(-m, e); }

    // |a| as a scaled real, returned as log2; convenience for residual scales.
    friend double scaled_abs_ratio(const ScaledComplex& num, const ScaledComplex& den) {
        return std::exp2(num.log2_abs() - den.log2_abs());
    }
};

// (num/den) as plain complex; relative precision of the mantissas is kept
// even when num and den are individually far outside double range.
inline cplx scaled_ratio(const ScaledComplex& num, const ScaledComplex& den) {
    return (num / den).value();
}

} // namespace tsum

#endif
