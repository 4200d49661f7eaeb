#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "tsum/errors.hpp"
#include "tsum/rng.hpp"
#include "tsum/theta_kernel.hpp"

using namespace tsum;

namespace {

double rel_err(cplx got, cplx want) {
    const double scale = std::max(std::abs(want), std::abs(got));
    if (scale == 0.0) return std::abs(got - want);
    return std::abs(got - want) / scale;
}

} // namespace

TEST_CASE("pochhammer_inf basic values") {
    CHECK(rel_err(pochhammer_inf({0.5, 0.0}, {0.0, 0.0}), {0.5, 0.0}) < 1e-15);
    CHECK(rel_err(pochhammer_inf({0.0, 0.0}, {0.3, 0.0}), {1.0, 0.0}) < 1e-15);

    // brute-force 200-term product oracle
    cplx a{0.2, 0.0}, p{0.1, 0.0};
    cplx brute{1.0, 0.0};
    cplx apn = a;
    for (int n = 0; n < 200; ++n) {
        brute *= (1.0 - apn);
        apn *= p;
    }
    CHECK(rel_err(pochhammer_inf(a, p, 1e-14), brute) < 1e-14);

    CHECK_THROWS_AS(pochhammer_inf({0.2, 0.0}, {1.5, 0.0}), DomainError);
}

TEST_CASE("theta_short basic values and functional relations") {
    // p = 0 collapses to 1 - a
    CHECK(rel_err(theta_short({0.3, 0.7}, {0.0, 0.0}), cplx(0.7, -0.7)) < 1e-15);
    // a = 1 is a zero
    CHECK(std::abs(theta_short({1.0, 0.0}, {0.2, 0.0})) < 1e-14);
    CHECK_THROWS_AS(theta_short({0.0, 0.0}, {0.2, 0.0}), DomainError);

    // theta(pa; p) = theta(1/a; p) = -theta(a; p)/a
    const cplx a{0.3, 0.1}, p{0.15, 0.0};
    const cplx th = theta_short(a, p);
    CHECK(rel_err(theta_short(p * a, p), -th / a) < 1e-13);
    CHECK(rel_err(theta_short(1.0 / a, p), -th / a) < 1e-13);

    Rng rng(2024);
    for (int i = 0; i < 100; ++i) {
        const cplx ar = rng.annulus(0.1, 10.0);
        const cplx pr = rng.annulus(0.01, 0.3);
        const cplx t = theta_short(ar, pr);
        if (std::abs(t) < 1e-8) continue;
        CHECK(rel_err(theta_short(pr * ar, pr), -t / ar) < 1e-12);
        CHECK(rel_err(theta_short(1.0 / ar, pr), -t / ar) < 1e-12);
    }
}

TEST_CASE("theta_short scaled reduction handles far-out arguments") {
    const cplx p{0.05, 0.0};
    // a many p-octaves out: compare scaled reduction against direct product
    const cplx a{3.7e6, 1.0e5};
    const cplx direct = pochhammer_inf(a, p) * pochhammer_inf(p / a, p);
    CHECK(rel_err(theta_short_scaled(a, p).value(), direct) < 1e-12);
    // and a tiny argument
    const cplx b{2.0e-7, 3.0e-8};
    const cplx direct_b = pochhammer_inf(b, p) * pochhammer_inf(p / b, p);
    CHECK(rel_err(theta_short_scaled(b, p).value(), direct_b) < 1e-12);
}

TEST_CASE("theta1 zero, oddness, dual route") {
    const ModularPair mp({1.0, 0.0}, {0.0, 0.5});
    CHECK(std::abs(theta1(0.0, mp)) < 1e-14);

    const cplx u{0.3, 0.0};
    CHECK(rel_err(theta1(-u, mp), -theta1(u, mp)) < 1e-13);

    // series route vs product route
    CHECK(rel_err(theta1(u, mp, Theta1Route::series), theta1(u, mp, Theta1Route::product)) < 1e-12);

    Rng rng(77);
    for (int i = 0; i < 50; ++i) {
        const ModularPair b(rng.box(0.2, 1.2, -0.2, 0.2), rng.box(-0.4, 0.4, 0.25, 1.2));
        const cplx v = rng.box(-0.8, 0.8, -0.3, 0.3);
        const cplx s = theta1(v, b, Theta1Route::series);
        const cplx pr = theta1(v, b, Theta1Route::product);
        if (std::abs(s) < 1e-8) continue;
        CHECK(rel_err(s, pr) < 1e-12);
        CHECK(rel_err(theta1(-v, b), -s) < 1e-12);
    }
}

TEST_CASE("theta1 quasi-periodicity") {
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        const ModularPair b(rng.box(0.3, 1.1, -0.15, 0.15), rng.box(-0.3, 0.3, 0.3, 1.0));
        const cplx u = rng.box(-0.6, 0.6, -0.25, 0.25);
        const cplx t = theta1(u, b);
        if (std::abs(t) < 1e-8) continue;
        // [u + 1/sigma] = -[u]
        CHECK(rel_err(theta1(u + 1.0 / b.sigma, b), -t) < 1e-10);
        // [u + tau/sigma] = -exp(-pi i tau - 2 pi i sigma u) [u]
        const cplx mult = -std::exp(cplx(0.0, -kPi) * b.tau + cplx(0.0, -2.0 * kPi) * b.sigma * u);
        CHECK(rel_err(theta1(u + b.tau / b.sigma, b), mult * t) < 1e-10);
    }
}

TEST_CASE("theta1 modular transformations") {
    Rng rng(59);
    for (int i = 0; i < 100; ++i) {
        const ModularPair b(rng.box(0.3, 1.0, -0.1, 0.1), rng.box(-0.3, 0.3, 0.4, 1.2));
        const cplx u = rng.box(-0.5, 0.5, -0.2, 0.2);
        const cplx t = theta1(u, b);
        if (std::abs(t) < 1e-8) continue;

        // T: [u; sigma, tau+1] = e^{i pi/4} [u; sigma, tau]
        const ModularPair bT(b.sigma, b.tau + 1.0);
        CHECK(rel_err(theta1(u, bT), std::exp(cplx(0.0, kPi / 4.0)) * t) < 1e-10);

        // S: [u; sigma/tau, -1/tau] = -i (-i tau)^{1/2} e^{i pi sigma^2 u^2 / tau} [u]
        const ModularPair bS(b.sigma / b.tau, -1.0 / b.tau);
        cplx root = std::sqrt(cplx(0.0, -1.0) * b.tau);
        if (root.real() < 0.0) root = -root;
        const cplx rhs = cplx(0.0, -1.0) * root *
                         std::exp(cplx(0.0, kPi) * b.sigma * b.sigma * u * u / b.tau) * t;
        CHECK(rel_err(theta1(u, bS), rhs) < 1e-10);
    }
}

TEST_CASE("shifted factorials") {
    const ModularPair mp({0.9, 0.05}, {0.1, 0.45});
    const cplx q = mp.q(), p = mp.p();

    const std::vector<cplx> empty_params{cplx(0.4, 0.1)};
    CHECK(rel_err(shifted_factorial(empty_params, 0, q, p).value(), {1.0, 0.0}) < 1e-15);

    const std::vector<cplx> single{cplx(0.4, 0.1)};
    CHECK(rel_err(shifted_factorial(single, 1, q, p).value(), theta_short(single[0], p)) < 1e-14);

    // two parameters, n = 3: six-factor direct product
    const std::vector<cplx> two{cplx(0.2, 0.0), cplx(0.4, 0.0)};
    const cplx p2{0.1, 0.0}, q2{0.3, 0.0};
    cplx direct{1.0, 0.0};
    for (const cplx& t : two)
        for (int j = 0; j < 3; ++j) direct *= theta_short(t * std::pow(q2, j), p2);
    CHECK(rel_err(shifted_factorial(two, 3, q2, p2).value(), direct) < 1e-13);

    const std::vector<cplx> zero_param{cplx(0.0, 0.0)};
    CHECK_THROWS_AS(shifted_factorial(zero_param, 2, q, p), DomainError);

    // additive form: [u0]_2 = [u0][u0+1]
    const ModularPair mb({1.0, 0.0}, {0.0, 0.6});
    const std::vector<cplx> us{cplx(0.2, 0.0)};
    const cplx want = theta1(us[0], mb) * theta1(us[0] + 1.0, mb);
    CHECK(rel_err(shifted_factorial_add(us, 2, mb).value(), want) < 1e-13);
    CHECK(rel_err(shifted_factorial_add(us, 0, mb).value(), {1.0, 0.0}) < 1e-15);

    // additive vs multiplicative with t = q^u:
    // prod_j [u+j] = (i p^{1/8} (p;p)_inf)^n q^{-(n u + n(n-1)/2)/2} theta(t;p;q)_n
    const ModularPair mg({0.7, 0.1}, {0.05, 0.5});
    const cplx u0{0.23, -0.11};
    const int n = 3;
    const cplx t0 = mg.q_pow(u0);
    const std::vector<cplx> uu{u0}, tt{t0};
    const cplx add = shifted_factorial_add(uu, n, mg).value();
    const cplx mult = shifted_factorial(tt, n, mg.q(), mg.p()).value();
    const cplx unit = cplx(0.0, 1.0) * mg.p_pow(0.125) * pochhammer_inf(mg.p(), mg.p());
    const cplx pref = std::pow(unit, n) * mg.q_pow(-0.5 * (static_cast<double>(n) * u0 +
                                                           0.5 * n * (n - 1.0)));
    CHECK(rel_err(add, pref * mult) < 1e-12);
}

TEST_CASE("psl2_act") {
    const ModularPair b({0.7, 0.0}, {0.3, 0.8});
    const auto id = std::array<std::array<long, 2>, 2>{{{1, 0}, {0, 1}}};
    const auto T = std::array<std::array<long, 2>, 2>{{{1, 1}, {0, 1}}};
    const auto S = std::array<std::array<long, 2>, 2>{{{0, -1}, {1, 0}}};

    const ModularPair bi = psl2_act(b, id);
    CHECK(std::abs(bi.tau - b.tau) < 1e-15);
    CHECK(std::abs(bi.sigma - b.sigma) < 1e-15);

    const ModularPair bt = psl2_act(b, T);
    CHECK(std::abs(bt.tau - (b.tau + 1.0)) < 1e-15);
    CHECK(std::abs(bt.sigma - b.sigma) < 1e-15);

    const ModularPair bs = psl2_act(b, S);
    CHECK(std::abs(bs.tau + 1.0 / b.tau) < 1e-15);
    CHECK(std::abs(bs.sigma - b.sigma / b.tau) < 1e-15);

    const auto bad = std::array<std::array<long, 2>, 2>{{{2, 0}, {0, 1}}};
    CHECK_THROWS_AS(psl2_act(b, bad), DomainError);
}

TEST_CASE("spec example: series route equals product route at u=0.3, sigma=1, tau=0.5i") {
    const ModularPair mp({1.0, 0.0}, {0.0, 0.5});
    const cplx s = theta1({0.3, 0.0}, mp, Theta1Route::series);
    const cplx p = theta1({0.3, 0.0}, mp, Theta1Route::product);
    CHECK(rel_err(s, p) < 1e-12);
}
