#ifndef TSUM_RATIONAL_HPP
#define TSUM_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace tsum {

// Exact small-denominator rational. Theta characteristics stay in (1/2)Z
// under the theta-group action, but compositions are accumulated exactly so
// repeated transformations cannot drift.
struct Rational {
    std::int64_t num{0};
    std::int64_t den{1};

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { reduce(); }

    static Rational half() { return Rational(1, 2); }

    void reduce() {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(Rational a, Rational b) {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rational operator-(Rational a, Rational b) {
        return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
    friend Rational operator*(std::int64_t k, Rational b) { return Rational(k * b.num, b.den); }
    Rational operator-() const { return Rational(-num, den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

    bool is_integer() const { return den == 1; }
};

} // namespace tsum

#endif
