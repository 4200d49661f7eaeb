#include "tsum/ehs.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tsum/errors.hpp"

namespace tsum {

namespace {

bool near(cplx a, cplx b, double rel_tol = 1e-12) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= rel_tol * std::max(scale, 1e-300);
}

void check_nonzero(const std::vector<cplx>& v, const char* what) {
    for (const cplx& x : v)
        if (x == cplx(0.0, 0.0)) throw DomainError(std::string(what) + ": zero parameter");
}

ScaledComplex int_pow(cplx base, int k) {
    ScaledComplex acc = ScaledComplex::one();
    const ScaledComplex b{base};
    for (int i = 0; i < std::abs(k); ++i) acc = (k >= 0) ? acc * b : acc / b;
    return acc;
}

} // namespace

VWPSpec make_vwp(cplx t0, std::vector<cplx> free_params, cplx z, const ModularPair& bases) {
    VWPSpec s{t0, std::move(free_params), z, bases};
    if (s.t0 == cplx(0.0, 0.0)) throw DomainError("make_vwp: t0 must be nonzero");
    check_nonzero(s.free_params, "make_vwp");
    return s;
}

EllipticSeriesSpec expand_vwp(const VWPSpec& spec) {
    const cplx q = spec.bases.q();
    const cplx s = std::sqrt(spec.t0);
    const cplx rp = std::sqrt(spec.bases.p());
    EllipticSeriesSpec full{{}, {}, spec.z, spec.bases};
    full.t.reserve(spec.r() + 1);
    full.t.push_back(spec.t0);
    for (const cplx& t : spec.free_params) full.t.push_back(t);
    full.t.push_back(s * q);
    full.t.push_back(-s * q);
    full.t.push_back(s * q / rp);
    full.t.push_back(-s * q * rp);
    full.w.reserve(spec.r() + 1);
    full.w.push_back(q);
    for (int m = 1; m <= spec.r(); ++m) full.w.push_back(q * spec.t0 / full.t[m]);
    return full;
}

cplx h_ratio(const EllipticSeriesSpec& spec, cplx n) {
    if (spec.t.size() != spec.w.size() || spec.t.empty())
        throw DomainError("h_ratio: parameter lists must be nonempty and equal length");
    if (spec.z == cplx(0.0, 0.0)) return {0.0, 0.0};
    check_nonzero(spec.t, "h_ratio");
    check_nonzero(spec.w, "h_ratio");
    const cplx qn = spec.bases.q_pow(n);
    const cplx p = spec.bases.p();
    ScaledComplex num = ScaledComplex::one();
    ScaledComplex den = ScaledComplex::one();
    for (std::size_t i = 0; i < spec.t.size(); ++i) {
        num *= theta_short_scaled(spec.t[i] * qn, p);
        den *= theta_short_scaled(spec.w[i] * qn, p);
    }
    if (den.is_zero() || num.log2_abs() - den.log2_abs() > 160.0)
        throw PoleError("h_ratio: denominator theta vanishes at this n");
    return scaled_ratio(num, den) * spec.z;
}

SeriesFlags classify(const EllipticSeriesSpec& spec) {
    SeriesFlags flags;
    if (spec.t.size() != spec.w.size() || spec.t.empty()) return flags;
    const int r = spec.r();
    const cplx q = spec.bases.q();
    const cplx p = spec.bases.p();

    cplx tprod{1.0, 0.0}, wprod{1.0, 0.0};
    for (const cplx& t : spec.t) tprod *= t;
    for (const cplx& w : spec.w) wprod *= w;
    flags.balanced = near(tprod, wprod);

    bool wp = r >= 1 && near(spec.w[0], q);
    const cplx qt0 = q * spec.t[0];
    for (int m = 1; m <= r && wp; ++m) wp = near(qt0, spec.t[m] * spec.w[m]);
    flags.well_poised = wp;

    if (flags.well_poised && r >= 4) {
        // t_{r-3} = s q, t_{r-2} = -s q, {t_{r-1}, t_r} = {s q p^{-1/2},
        // -s q p^{1/2}} with either branch of the square roots.
        const cplx s_cand = spec.t[r - 3] / q;
        const cplx rp = std::sqrt(p);
        const bool head = near(s_cand * s_cand, spec.t[0]) && near(spec.t[r - 2], -q * s_cand);
        const bool tail_principal =
            near(spec.t[r - 1], q * s_cand / rp) && near(spec.t[r], -q * s_cand * rp);
        const bool tail_flipped =
            near(spec.t[r - 1], -q * s_cand / rp) && near(spec.t[r], q * s_cand * rp);
        flags.very_well_poised = head && (tail_principal || tail_flipped);
    }

    if (flags.well_poised && r % 2 == 1) {
        // totally elliptic only on the "+" branch of the balancing condition:
        // t_1 ... t_r = + q^{(r+1)/2} t_0^{(r-1)/2}
        ScaledComplex lhs = ScaledComplex::one();
        for (int m = 1; m <= r; ++m) lhs *= ScaledComplex(spec.t[m]);
        const ScaledComplex rhs = int_pow(q, (r + 1) / 2) * int_pow(spec.t[0], (r - 1) / 2);
        flags.totally_elliptic_candidate = near(scaled_ratio(lhs, rhs), cplx(1.0, 0.0));
    }
    return flags;
}

TerminationInfo detect_termination(const EllipticSeriesSpec& spec, int max_length) {
    const cplx q = spec.bases.q();
    for (std::size_t m = 0; m < spec.t.size(); ++m) {
        cplx tq = spec.t[m];
        for (int N = 0; N <= max_length; ++N) {
            if (std::abs(tq - 1.0) < 1e-10) return {true, static_cast<int>(m), N};
            tq *= q;
        }
    }
    return {};
}

namespace {

cplx sum_terms_by_ratio(const EllipticSeriesSpec& spec, int terms, bool guard_ratio) {
    ScaledComplex sum = ScaledComplex::one(); // c_0 = 1
    ScaledComplex term = ScaledComplex::one();
    for (int n = 0; n < terms; ++n) {
        const cplx h = h_ratio(spec, cplx(static_cast<double>(n), 0.0));
        if (guard_ratio && std::abs(h) >= 1.0)
            throw DivergenceError("series_eval: term ratio |h(n)| >= 1 for nonterminating series");
        term *= ScaledComplex(h);
        if (term.is_zero()) break;
        sum = sum + term;
        if (guard_ratio && term.log2_abs() < sum.log2_abs() - 55.0) break;
    }
    return sum.value();
}

} // namespace

cplx series_eval(const EllipticSeriesSpec& spec, const TerminationInfo& term) {
    if (!term.terminating) throw DomainError("series_eval: TerminationInfo is not terminating");
    return sum_terms_by_ratio(spec, term.length, false);
}

cplx series_eval(const EllipticSeriesSpec& spec, int max_terms) {
    if (max_terms < 1) throw DomainError("series_eval: max_terms must be >= 1");
    const TerminationInfo term = detect_termination(spec, max_terms);
    if (term.terminating) return sum_terms_by_ratio(spec, term.length, false);
    return sum_terms_by_ratio(spec, max_terms, true);
}

cplx h_vwp(const VWPSpec& spec, cplx n, double tol) {
    const cplx q = spec.bases.q();
    const cplx p = spec.bases.p();
    const cplx qn = spec.bases.q_pow(n);
    ScaledComplex num = theta_short_scaled(spec.t0 * qn * qn * q * q, p, tol);
    ScaledComplex den = theta_short_scaled(spec.t0 * qn * qn, p, tol);
    num *= theta_short_scaled(spec.t0 * qn, p, tol);
    den *= theta_short_scaled(q * qn, p, tol);
    for (const cplx& t : spec.free_params) {
        num *= theta_short_scaled(t * qn, p, tol);
        den *= theta_short_scaled(q * spec.t0 * qn / t, p, tol);
    }
    if (den.is_zero() || num.log2_abs() - den.log2_abs() > 160.0)
        throw PoleError("h_vwp: denominator theta vanishes");
    return scaled_ratio(num, den) * (-q * spec.z);
}

cplx series_eval(const VWPSpec& spec, int n_terms) {
    if (n_terms < 1) throw DomainError("series_eval: n_terms must be >= 1");
    ScaledComplex sum = ScaledComplex::one();
    ScaledComplex term = ScaledComplex::one();
    for (int n = 0; n < n_terms; ++n) {
        term *= ScaledComplex(h_vwp(spec, cplx(static_cast<double>(n), 0.0)));
        if (term.is_zero()) break;
        sum = sum + term;
        if (term.log2_abs() < sum.log2_abs() - 55.0) break;
    }
    return sum.value();
}

std::pair<cplx, cplx> frenkel_turaev_pair(cplx t0, cplx t1, cplx t2, cplx t3, int n,
                                          const ModularPair& bases, double tol) {
    if (n < 0) throw DomainError("frenkel_turaev_pair: n must be >= 0");
    const cplx q = bases.q();
    const cplx p = bases.p();
    const ScaledComplex t4s = int_pow(q, -n);
    const cplx t4 = t4s.value();
    const cplx t5 = (ScaledComplex(q * t0 * t0) / (ScaledComplex(t1) * ScaledComplex(t2) *
                                                   ScaledComplex(t3) * t4s))
                        .value();
    const std::array<cplx, 6> ts{t0, t1, t2, t3, t4, t5};

    ScaledComplex sum = ScaledComplex::one();
    ScaledComplex term = ScaledComplex::one();
    for (int k = 0; k < n; ++k) {
        const cplx qk = int_pow(q, k).value();
        ScaledComplex h = theta_short_scaled(t0 * qk * qk * q * q, p, tol) /
                          theta_short_scaled(t0 * qk * qk, p, tol);
        for (const cplx& tm : ts) {
            h *= theta_short_scaled(tm * qk, p, tol);
            const ScaledComplex d = theta_short_scaled(q * t0 / tm * qk, p, tol);
            if (d.is_zero()) throw ResampleSignal("frenkel_turaev_pair: denominator vanished");
            h /= d;
        }
        h *= ScaledComplex(q);
        term *= h;
        sum = sum + term;
    }

    const std::array<cplx, 4> nums{q * t0, q * t0 / (t1 * t2), q * t0 / (t1 * t3),
                                   q * t0 / (t2 * t3)};
    const std::array<cplx, 4> dens{q * t0 / (t1 * t2 * t3), q * t0 / t1, q * t0 / t2, q * t0 / t3};
    const ScaledComplex rnum = shifted_factorial(nums, n, q, p, tol);
    const ScaledComplex rden = shifted_factorial(dens, n, q, p, tol);
    if (rden.is_zero()) throw ResampleSignal("frenkel_turaev_pair: rhs denominator vanished");
    return {sum.value(), (rnum / rden).value()};
}

namespace {

std::pair<cplx, cplx> sum_8e7_mult(cplx t0, cplx t1, cplx t2, int n, const ModularPair& bases,
                                   double tol) {
    const cplx q = bases.q();
    const cplx p = bases.p();
    const cplx t3 = t0 / (t1 * t2);
    const std::array<cplx, 4> ts{t0, t1, t2, t3};

    ScaledComplex sum = ScaledComplex::one();
    ScaledComplex term = ScaledComplex::one();
    for (int k = 0; k < n; ++k) {
        const cplx qk = int_pow(q, k).value();
        ScaledComplex h = theta_short_scaled(t0 * qk * qk * q * q, p, tol) /
                          theta_short_scaled(t0 * qk * qk, p, tol);
        for (const cplx& tm : ts) {
            h *= theta_short_scaled(tm * qk, p, tol);
            const ScaledComplex d = theta_short_scaled(q * t0 / tm * qk, p, tol);
            if (d.is_zero()) throw ResampleSignal("sum_8e7_pair: denominator vanished");
            h /= d;
        }
        h *= ScaledComplex(q);
        term *= h;
        sum = sum + term;
    }

    const std::array<cplx, 4> nums{q * t0, q * t1, q * t2, q * t0 / (t1 * t2)};
    const std::array<cplx, 4> dens{q, q * t0 / t1, q * t0 / t2, q * t1 * t2};
    const ScaledComplex rnum = shifted_factorial(nums, n, q, p, tol);
    const ScaledComplex rden = shifted_factorial(dens, n, q, p, tol);
    if (rden.is_zero()) throw ResampleSignal("sum_8e7_pair: rhs denominator vanished");
    return {sum.value(), (rnum / rden).value()};
}

std::pair<cplx, cplx> sum_8e7_add(cplx t0, cplx t1, cplx t2, int n, const ModularPair& bases,
                                  double tol) {
    // u_i = Log t_i / (2 pi i sigma); q^{u_i} reproduces t_i exactly, so the
    // additive identity is evaluated at matching parameters while every
    // bracket goes through the theta_1 series rather than theta products.
    const cplx two_pi_i{0.0, 2.0 * kPi};
    const cplx u0 = std::log(t0) / (two_pi_i * bases.sigma);
    const cplx u1 = std::log(t1) / (two_pi_i * bases.sigma);
    const cplx u2 = std::log(t2) / (two_pi_i * bases.sigma);
    const cplx one{1.0, 0.0};

    const std::array<cplx, 4> nums{u0, u1, u2, u0 - u1 - u2};
    const std::array<cplx, 4> dens{one, one + u0 - u1, one + u0 - u2, one + u1 + u2};

    auto br = [&](cplx u) { return ScaledComplex(theta1(u, bases, Theta1Route::series, tol)); };

    ScaledComplex sum = ScaledComplex::zero();
    const ScaledComplex br_u0 = br(u0);
    if (br_u0.is_zero()) throw ResampleSignal("sum_8e7_pair: [u0] vanished");
    ScaledComplex fact = ScaledComplex::one(); // [nums]_k / [dens]_k, grown incrementally
    for (int k = 0; k <= n; ++k) {
        sum = sum + br(u0 + 2.0 * static_cast<double>(k)) / br_u0 * fact;
        if (k < n) {
            for (const cplx& u : nums) fact *= br(u + static_cast<double>(k));
            for (const cplx& u : dens) {
                const ScaledComplex d = br(u + static_cast<double>(k));
                if (d.is_zero())
                    throw ResampleSignal("sum_8e7_pair: additive denominator vanished");
                fact /= d;
            }
        }
    }

    const std::array<cplx, 4> rnums{one + u0, one + u1, one + u2, one + u0 - u1 - u2};
    const ScaledComplex rnum = shifted_factorial_add(rnums, n, bases, tol);
    const ScaledComplex rden = shifted_factorial_add(dens, n, bases, tol);
    if (rden.is_zero()) throw ResampleSignal("sum_8e7_pair: additive rhs denominator vanished");
    return {sum.value(), (rnum / rden).value()};
}

} // namespace

std::pair<cplx, cplx> sum_8e7_pair(cplx t0, cplx t1, cplx t2, int n, const ModularPair& bases,
                                   E87Form form, double tol) {
    if (n < 0) throw DomainError("sum_8e7_pair: n must be >= 0");
    return form == E87Form::multiplicative ? sum_8e7_mult(t0, t1, t2, n, bases, tol)
                                           : sum_8e7_add(t0, t1, t2, n, bases, tol);
}

namespace {

cplx vwp_balance_target(const VWPSpec& spec) {
    // q^{m-3} t0^{m-2} for r = 2m+1
    const int m = (spec.r() - 1) / 2;
    return (int_pow(spec.bases.q(), m - 3) * int_pow(spec.t0, m - 2)).value();
}

} // namespace

bool vwp_balanced(const VWPSpec& spec, double rel_tol) {
    if (spec.r() % 2 == 0) return false;
    cplx lhs{1.0, 0.0};
    for (const cplx& t : spec.free_params) lhs *= t;
    return near(lhs, vwp_balance_target(spec), rel_tol);
}

VWPSpec rebalance_companion(const VWPSpec& spec) {
    if (spec.free_params.empty()) throw DomainError("rebalance_companion: no free parameters");
    cplx others{1.0, 0.0};
    for (std::size_t j = 0; j + 1 < spec.free_params.size(); ++j) others *= spec.free_params[j];
    VWPSpec out = spec;
    out.free_params.back() = vwp_balance_target(spec) / others;
    return out;
}

namespace {

double max_h_shift_residual(const VWPSpec& a, const VWPSpec& b, cplx n_offset, int n_samples) {
    double worst = 0.0;
    int used = 0;
    for (int n = 0; used < n_samples && n < n_samples + 6; ++n) {
        try {
            const cplx h0 = h_vwp(a, cplx(static_cast<double>(n), 0.0));
            const cplx h1 = h_vwp(b, cplx(static_cast<double>(n), 0.0) + n_offset);
            if (std::abs(h0) < 1e-12) continue;
            worst = std::max(worst, std::abs(h1 / h0 - 1.0));
            ++used;
        } catch (const PoleError&) {
            continue;
        }
    }
    if (used == 0) throw ResampleSignal("h residual: all sampled n hit poles");
    return worst;
}

} // namespace

double total_ellipticity_residual(const VWPSpec& spec, int n_samples) {
    if (spec.r() % 2 == 0 || !vwp_balanced(spec, 1e-9))
        throw DomainError("total_ellipticity_residual: spec must be balanced with odd r");
    VWPSpec shifted = spec;
    shifted.t0 *= spec.bases.p();
    shifted = rebalance_companion(shifted);
    return max_h_shift_residual(spec, shifted, {0.0, 0.0}, n_samples);
}

double vwp_double_period_residual(const VWPSpec& spec, int n_samples) {
    if (spec.r() % 2 == 0 || !vwp_balanced(spec, 1e-9))
        throw DomainError("vwp_double_period_residual: spec must be balanced with odd r");
    return max_h_shift_residual(spec, spec, spec.bases.tau / spec.bases.sigma, n_samples);
}

} // namespace tsum
