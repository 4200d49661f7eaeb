#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "tsum/ehs.hpp"
#include "tsum/errors.hpp"
#include "tsum/rng.hpp"

using namespace tsum;

namespace {

double rel_err(cplx got, cplx want) {
    const double scale = std::max(std::abs(want), std::abs(got));
    if (scale == 0.0) return std::abs(got - want);
    return std::abs(got - want) / scale;
}

ModularPair sample_bases(Rng& rng) {
    // |q| in [0.15, 0.85], p in (0.02, 0.3) with small phases
    const double abs_q = rng.uniform(0.15, 0.85);
    const cplx sigma{rng.uniform(0.0, 1.0), -std::log(abs_q) / (2.0 * kPi)};
    const double abs_p = rng.uniform(0.02, 0.3);
    const cplx tau{rng.uniform(0.0, 1.0), -std::log(abs_p) / (2.0 * kPi)};
    return {sigma, tau};
}

EllipticSeriesSpec sample_balanced(Rng& rng, int r) {
    const ModularPair bases = sample_bases(rng);
    EllipticSeriesSpec spec{{}, {}, rng.annulus(0.5, 2.0), bases};
    for (int i = 0; i <= r; ++i) spec.t.push_back(rng.annulus(0.5, 2.0));
    spec.w.push_back(bases.q());
    for (int i = 1; i < r; ++i) spec.w.push_back(rng.annulus(0.5, 2.0));
    cplx tprod{1.0, 0.0}, wprod{1.0, 0.0};
    for (const cplx& t : spec.t) tprod *= t;
    for (const cplx& w : spec.w) wprod *= w;
    spec.w.push_back(tprod / wprod);
    return spec;
}

VWPSpec sample_balanced_vwp(Rng& rng, int m) {
    // r = 2m+1, free params t_1..t_{2m-3} with the last one rebalanced
    const ModularPair bases = sample_bases(rng);
    std::vector<cplx> frees;
    for (int j = 0; j < 2 * m - 3; ++j) frees.push_back(rng.annulus(0.5, 2.0));
    VWPSpec spec = make_vwp(rng.annulus(0.5, 2.0), frees, rng.annulus(0.5, 1.5), bases);
    return rebalance_companion(spec);
}

} // namespace

TEST_CASE("h_ratio trivial cases") {
    const ModularPair bases({0.8, 0.08}, {0.1, 0.4});
    EllipticSeriesSpec unit{{bases.q()}, {bases.q()}, {1.0, 0.0}, bases};
    CHECK(rel_err(h_ratio(unit, {0.3, 0.1}), {1.0, 0.0}) < 1e-13);
    CHECK(rel_err(h_ratio(unit, {2.0, -0.4}), {1.0, 0.0}) < 1e-13);

    EllipticSeriesSpec zero = unit;
    zero.z = {0.0, 0.0};
    CHECK(std::abs(h_ratio(zero, {0.5, 0.0})) == 0.0);
}

TEST_CASE("h_ratio double periodicity for balanced specs") {
    Rng rng(401);
    int done = 0;
    while (done < 50) {
        EllipticSeriesSpec spec = sample_balanced(rng, rng.uniform_int(2, 5));
        const cplx n = rng.box(-1.0, 1.0, -0.3, 0.3);
        try {
            const cplx h0 = h_ratio(spec, n);
            if (std::abs(h0) < 1e-10 || std::abs(h0) > 1e10) continue;
            const cplx h_sigma = h_ratio(spec, n + 1.0 / spec.bases.sigma);
            const cplx h_tau = h_ratio(spec, n + spec.bases.tau / spec.bases.sigma);
            CHECK(rel_err(h_sigma, h0) < 1e-9);
            CHECK(rel_err(h_tau, h0) < 1e-9);
        } catch (const PoleError&) {
            continue;
        }
        ++done;
    }
}

TEST_CASE("classify flags") {
    Rng rng(402);
    const ModularPair bases = sample_bases(rng);

    SUBCASE("vwp spec by construction") {
        VWPSpec vs = make_vwp({0.7, 0.2}, {{0.4, 0.1}, {1.2, -0.3}, {0.8, 0.0}}, {1.0, 0.0}, bases);
        const EllipticSeriesSpec full = expand_vwp(vs);
        const SeriesFlags flags = classify(full);
        CHECK(flags.well_poised);
        CHECK(flags.very_well_poised);

        EllipticSeriesSpec bad = full;
        bad.t[bad.r() - 1] *= 1.01;
        const SeriesFlags bflags = classify(bad);
        CHECK_FALSE(bflags.very_well_poised);
        CHECK_FALSE(bflags.well_poised);
    }

    SUBCASE("frenkel-turaev parameter set is balanced") {
        const cplx q = bases.q();
        const cplx t0{0.8, 0.1}, t1{1.2, 0.0}, t2{0.5, -0.2}, t3{1.4, 0.3};
        const cplx t4 = 1.0 / (q * q * q);
        const cplx t5 = q * t0 * t0 / (t1 * t2 * t3 * t4);
        EllipticSeriesSpec spec{{}, {}, {-1.0, 0.0}, bases};
        spec.t = {t0, t1, t2, t3, t4, t5};
        const cplx s = std::sqrt(t0), rp = std::sqrt(bases.p());
        spec.t.push_back(s * q);
        spec.t.push_back(-s * q);
        spec.t.push_back(s * q / rp);
        spec.t.push_back(-s * q * rp);
        spec.w.push_back(q);
        for (int m = 1; m <= spec.r(); ++m) spec.w.push_back(q * t0 / spec.t[m]);
        const SeriesFlags flags = classify(spec);
        CHECK(flags.well_poised);
        CHECK(flags.very_well_poised);
        CHECK(flags.balanced);
        CHECK(flags.totally_elliptic_candidate);

        EllipticSeriesSpec bad = spec;
        bad.t[1] *= 1.01;
        bad.w[1] = q * t0 / bad.t[1]; // keep well-poised, break balance
        const SeriesFlags bflags = classify(bad);
        CHECK(bflags.well_poised);
        CHECK_FALSE(bflags.balanced);
        CHECK_FALSE(bflags.totally_elliptic_candidate);
    }
}

TEST_CASE("series_eval terminating") {
    const ModularPair bases({0.6, 0.12}, {0.05, 0.38});
    const cplx q = bases.q(), p = bases.p();

    SUBCASE("N = 0 gives 1") {
        EllipticSeriesSpec spec{{cplx(1.0, 0.0), cplx(0.7, 0.1)},
                                {q, cplx(0.9, -0.2)},
                                {0.8, 0.1},
                                bases};
        const TerminationInfo info = detect_termination(spec);
        REQUIRE(info.terminating);
        CHECK(info.length == 0);
        CHECK(rel_err(series_eval(spec, info), {1.0, 0.0}) == 0.0);
    }

    SUBCASE("N = 4 matches direct term products") {
        const int N = 4;
        EllipticSeriesSpec spec{{}, {}, {0.9, 0.2}, bases};
        cplx tN{1.0, 0.0};
        for (int i = 0; i < N; ++i) tN /= q;
        spec.t = {cplx(0.6, 0.1), tN, cplx(1.3, -0.2)};
        spec.w = {q, cplx(0.8, 0.3), cplx(1.1, 0.0)};
        const TerminationInfo info = detect_termination(spec);
        REQUIRE(info.terminating);
        REQUIRE(info.length == N);
        CHECK(info.index == 1);

        // independent oracle: c_k as explicit ratios of factorial products
        ScaledComplex oracle = ScaledComplex::zero();
        ScaledComplex zk = ScaledComplex::one();
        for (int k = 0; k <= N; ++k) {
            const ScaledComplex ck =
                shifted_factorial(spec.t, k, q, p) / shifted_factorial(spec.w, k, q, p) * zk;
            oracle = oracle + ck;
            zk *= ScaledComplex(spec.z);
        }
        CHECK(rel_err(series_eval(spec, info), oracle.value()) < 1e-11);
    }
}

TEST_CASE("vwp series p->0 reduces to the basic series") {
    const cplx sigma{0.35, 0.18};
    const ModularPair tiny(sigma, {0.0, 12.0 * std::log(10.0) / (2.0 * kPi)});
    CHECK(std::abs(tiny.p()) < 2e-12);

    const cplx t0{0.5, 0.1};
    const std::vector<cplx> frees{{1.3, -0.2}, {0.7, 0.3}};
    const cplx z{0.25, 0.05};
    const VWPSpec spec = make_vwp(t0, frees, z, tiny);
    const cplx val = series_eval(spec, 24);

    // p = 0 basic very-well-poised series of argument -qz: theta(a;0) = 1-a
    const cplx q = tiny.q();
    cplx basic{0.0, 0.0}, term{1.0, 0.0};
    std::vector<cplx> ts{t0, frees[0], frees[1]};
    for (int n = 0; n < 24; ++n) {
        const cplx qn = std::pow(q, n);
        basic += term;
        cplx h = (1.0 - t0 * qn * qn * q * q) / (1.0 - t0 * qn * qn);
        for (const cplx& t : ts) h *= (1.0 - t * qn) / (1.0 - q * t0 * qn / t);
        h *= -q * z;
        term *= h;
    }
    CHECK(rel_err(val, basic) < 1e-8);
}

TEST_CASE("frenkel-turaev summation") {
    const ModularPair bases({0.4, 0.23}, {0.0, 0.48});

    SUBCASE("n = 0 is (1,1)") {
        auto [lhs, rhs] = frenkel_turaev_pair({0.8, 0.1}, {1.2, 0.0}, {0.5, -0.2}, {1.4, 0.3}, 0,
                                              bases);
        CHECK(rel_err(lhs, {1.0, 0.0}) == 0.0);
        CHECK(rel_err(rhs, {1.0, 0.0}) == 0.0);
    }

    SUBCASE("n = 1 two-term check") {
        auto [lhs, rhs] = frenkel_turaev_pair({0.8, 0.1}, {1.2, 0.0}, {0.5, -0.2}, {1.4, 0.3}, 1,
                                              bases);
        CHECK(rel_err(lhs, rhs) < 1e-12);
    }

    SUBCASE("n = 6 random draws") {
        Rng rng(404);
        int done = 0;
        while (done < 20) {
            try {
                auto [lhs, rhs] =
                    frenkel_turaev_pair(rng.annulus(0.5, 2.0), rng.annulus(0.5, 2.0),
                                        rng.annulus(0.5, 2.0), rng.annulus(0.5, 2.0), 6, bases);
                if (std::abs(rhs) < 1e-12) continue;
                CHECK(rel_err(lhs, rhs) < 1e-10);
                ++done;
            } catch (const ResampleSignal&) {
                continue;
            }
        }
    }
}

TEST_CASE("8E7 summation") {
    const ModularPair bases({0.3, 0.2}, {0.1, 0.42});

    SUBCASE("n = 0") {
        auto [lhs, rhs] = sum_8e7_pair({0.7, 0.2}, {1.1, 0.1}, {0.6, -0.1}, 0, bases);
        CHECK(rel_err(lhs, {1.0, 0.0}) == 0.0);
        CHECK(rel_err(rhs, {1.0, 0.0}) == 0.0);
    }

    SUBCASE("ft limit route t3 -> t0/(t1 t2) matches") {
        const cplx t0{0.7, 0.2}, t1{1.1, 0.1}, t2{0.6, -0.1};
        const int n = 4;
        auto [flhs, frhs] = frenkel_turaev_pair(t0, t1, t2, t0 / (t1 * t2), n, bases);
        auto [elhs, erhs] = sum_8e7_pair(t0, t1, t2, n, bases);
        CHECK(rel_err(flhs, elhs) < 1e-11);
        CHECK(rel_err(frhs, erhs) < 1e-11);
    }

    SUBCASE("n = 5 draws, multiplicative and additive routes") {
        Rng rng(405);
        int done = 0;
        while (done < 15) {
            const cplx t0 = rng.annulus(0.6, 1.6), t1 = rng.annulus(0.6, 1.6),
                       t2 = rng.annulus(0.6, 1.6);
            try {
                auto [ml, mr] = sum_8e7_pair(t0, t1, t2, 5, bases, E87Form::multiplicative);
                auto [al, ar] = sum_8e7_pair(t0, t1, t2, 5, bases, E87Form::additive);
                if (std::abs(mr) < 1e-10) continue;
                CHECK(rel_err(ml, mr) < 1e-10);
                CHECK(rel_err(al, ar) < 1e-10);
                CHECK(rel_err(ml, al) < 1e-10);
                CHECK(rel_err(mr, ar) < 1e-10);
                ++done;
            } catch (const ResampleSignal&) {
                continue;
            }
        }
    }
}

TEST_CASE("total ellipticity") {
    Rng rng(406);

    SUBCASE("balanced odd-r specs are invariant") {
        for (int m : {3, 4, 5}) {
            int done = 0;
            while (done < 5) {
                const VWPSpec spec = sample_balanced_vwp(rng, m);
                REQUIRE(vwp_balanced(spec));
                try {
                    CHECK(total_ellipticity_residual(spec) < 1e-9);
                    CHECK(vwp_double_period_residual(spec) < 1e-9);
                    ++done;
                } catch (const ResampleSignal&) {
                    continue;
                }
            }
        }
    }

    SUBCASE("unbalanced control fails loudly") {
        VWPSpec spec = sample_balanced_vwp(rng, 3);
        spec.free_params[0] *= 1.07;
        CHECK_FALSE(vwp_balanced(spec));
        CHECK_THROWS_AS(total_ellipticity_residual(spec), DomainError);

        // raw shift without rebalancing: residual must be O(1)-ish
        VWPSpec shifted = spec;
        shifted.t0 *= spec.bases.p();
        double worst = 0.0;
        for (int n = 0; n < 4; ++n) {
            const cplx h0 = h_vwp(spec, cplx(static_cast<double>(n), 0.0));
            const cplx h1 = h_vwp(shifted, cplx(static_cast<double>(n), 0.0));
            worst = std::max(worst, std::abs(h1 / h0 - 1.0));
        }
        CHECK(worst > 1e-3);
    }

    SUBCASE("p-shift of a non-distinguished pair with companion") {
        int done = 0;
        while (done < 5) {
            const VWPSpec spec = sample_balanced_vwp(rng, 4); // 5 free params
            VWPSpec shifted = spec;
            shifted.free_params[1] *= spec.bases.p();
            shifted = rebalance_companion(shifted); // companion picks up p^{-1}
            double worst = 0.0;
            bool ok = true;
            for (int n = 0; n < 5 && ok; ++n) {
                try {
                    const cplx h0 = h_vwp(spec, cplx(static_cast<double>(n), 0.0));
                    const cplx h1 = h_vwp(shifted, cplx(static_cast<double>(n), 0.0));
                    if (std::abs(h0) < 1e-12) continue;
                    worst = std::max(worst, std::abs(h1 / h0 - 1.0));
                } catch (const PoleError&) {
                    ok = false;
                }
            }
            if (!ok) continue;
            CHECK(worst < 1e-9);
            ++done;
        }
    }
}

TEST_CASE("series divergence guard") {
    const ModularPair bases({0.5, 0.05}, {0.0, 0.4});
    EllipticSeriesSpec spec{{cplx(0.7, 0.1), cplx(1.3, 0.0)},
                            {bases.q(), cplx(0.9, 0.2)},
                            {40.0, 0.0},
                            bases};
    CHECK_THROWS_AS(series_eval(spec, 30), DivergenceError);
}
