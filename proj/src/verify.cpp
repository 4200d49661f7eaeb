#include "tsum/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "tsum/ehs.hpp"
#include "tsum/errors.hpp"
#include "tsum/rng.hpp"
#include "tsum/summation.hpp"
#include "tsum/surface.hpp"
#include "tsum/theta_kernel.hpp"

namespace tsum {

namespace {

const std::array<double, 6> kDefaultCurve{-5.0, -3.0, -1.0, 1.0, 3.0, 5.0};

struct TrialResult {
    double residual;
    std::string inputs;
};

double rel_pair(cplx a, cplx b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale < 1e-10) throw ResampleSignal("comparison scale too small");
    return std::abs(a - b) / scale;
}

std::string fmt_cplx(cplx v) {
    std::ostringstream os;
    os.precision(17);
    os << "[" << v.real() << "," << v.imag() << "]";
    return os.str();
}

ModularPair sample_bases(Rng& rng) {
    const double abs_q = rng.uniform(0.15, 0.85);
    const cplx sigma{rng.uniform(0.0, 1.0), -std::log(abs_q) / (2.0 * kPi)};
    const double abs_p = rng.uniform(0.02, 0.3);
    const cplx tau{rng.uniform(0.0, 1.0), -std::log(abs_p) / (2.0 * kPi)};
    return {sigma, tau};
}

PeriodMatrix sample_period_matrix(Rng& rng, int genus) {
    if (genus == 1) {
        CMatrix m(1, 1);
        m(0, 0) = rng.box(-0.4, 0.4, 0.5, 1.4);
        return PeriodMatrix(m);
    }
    // diagonally dominant Im keeps it positive definite
    CMatrix m(2, 2);
    const cplx off = rng.box(-0.3, 0.3, -0.35, 0.35);
    m(0, 0) = rng.box(-0.4, 0.4, 0.9, 1.8);
    m(1, 1) = rng.box(-0.4, 0.4, 0.9, 1.8);
    m(0, 1) = m(1, 0) = off;
    return PeriodMatrix(m);
}

Characteristic sample_half_char(Rng& rng, int genus) {
    Characteristic chi = Characteristic::zero(genus);
    for (int j = 0; j < genus; ++j) {
        if (rng.uniform01() < 0.5) chi.alpha[j] = Rational::half();
        if (rng.uniform01() < 0.5) chi.beta[j] = Rational::half();
    }
    return chi;
}

VWPSpec sample_balanced_vwp(Rng& rng, int m) {
    const ModularPair bases = sample_bases(rng);
    std::vector<cplx> frees;
    for (int j = 0; j < 2 * m - 3; ++j) frees.push_back(rng.annulus(0.5, 2.0));
    return rebalance_companion(make_vwp(rng.annulus(0.5, 2.0), frees, rng.annulus(0.5, 1.5), bases));
}

std::vector<IMatrix> theta_group_generators(int genus) {
    const auto mk = [](std::initializer_list<std::initializer_list<long long>> rows) {
        const int n = static_cast<int>(rows.size());
        IMatrix m(n, n);
        int i = 0;
        for (const auto& row : rows) {
            int j = 0;
            for (long long v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    };
    if (genus == 1)
        return {mk({{0, -1}, {1, 0}}), mk({{1, 2}, {0, 1}}), mk({{1, 0}, {2, 1}})};
    return {mk({{0, 0, -1, 0}, {0, 0, 0, -1}, {1, 0, 0, 0}, {0, 1, 0, 0}}),
            mk({{1, 0, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
            mk({{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, -1, 1}}),
            mk({{1, 0, 2, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
            mk({{1, 0, 0, 0}, {0, 1, 0, 2}, {0, 0, 1, 0}, {0, 0, 0, 1}})};
}

// Shared per-suite fixtures (lazy; genus-2 model built once per process).
struct GenusFixture {
    std::shared_ptr<const SurfaceModel> model;
    std::shared_ptr<const OddBracketConfig> bracket;
};

GenusFixture make_fixture(int genus, int nodes, double theta_tol) {
    GenusFixture fx;
    if (genus == 1) {
        fx.model = std::make_shared<const SurfaceModel>(SurfaceModel::make_torus({0.15, 0.95}));
    } else {
        static std::shared_ptr<const SurfaceModel> cached;
        static int cached_nodes = 0;
        if (!cached || cached_nodes != nodes) {
            cached = std::make_shared<const SurfaceModel>(
                SurfaceModel::make_hyperelliptic2(kDefaultCurve, nodes));
            cached_nodes = nodes;
        }
        fx.model = cached;
    }
    OddBracketConfig br = pick_odd_char(fx.model->omega(), theta_tol);
    fx.bracket = std::make_shared<const OddBracketConfig>(std::move(br));
    return fx;
}

SurfacePoint sample_point(Rng& rng, const SurfaceModel& model) {
    if (model.kind() == SurfaceModel::Kind::torus)
        return SurfacePoint::torus(rng.box(0.0, 1.0, 0.0, 0.8));
    const auto& e = model.branch_points();
    const bool first = rng.uniform01() < 0.5;
    const double lo = first ? e[1] : e[3];
    const double hi = first ? e[2] : e[4];
    const double pad = 0.05 * (hi - lo);
    return SurfacePoint::hyperelliptic(rng.uniform(lo + pad, hi - pad),
                                       rng.uniform01() < 0.5 ? +1 : -1);
}

CVector sample_z(Rng& rng, const SurfaceModel& model) {
    const int g = model.genus();
    CVector z(g);
    for (int j = 0; j < g; ++j)
        z[j] = cplx(rng.uniform(-0.5, 0.5),
                    rng.uniform(-0.2, 0.2) * model.omega().im()(j, j));
    return z;
}

SummandConfig sample_config(Rng& rng, const GenusFixture& fx, int n) {
    SummandConfig cfg;
    cfg.n = n;
    cfg.model = fx.model;
    cfg.bracket = fx.bracket;
    for (int k = 0; k <= n; ++k) {
        cfg.z.push_back(sample_z(rng, *fx.model));
        cfg.a.push_back(sample_point(rng, *fx.model));
        cfg.b.push_back(sample_point(rng, *fx.model));
        cfg.c.push_back(sample_point(rng, *fx.model));
        cfg.d.push_back(sample_point(rng, *fx.model));
    }
    return cfg;
}

using TrialFn = std::function<TrialResult(Rng&)>;

VerificationReport run_trials(const std::string& identity, const RunConfig& cfg, int trials,
                              double tol, const TrialFn& fn) {
    const auto start = std::chrono::steady_clock::now();
    VerificationReport rep;
    rep.identity = identity;
    rep.genus = cfg.genus;
    rep.seed = cfg.seed;
    rep.trials = trials;
    rep.tol = (cfg.tol > 0.0) ? cfg.tol : tol;

    double sum = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        TrialResult result{0.0, ""};
        std::uint64_t used_seed = 0;
        bool ok = false;
        for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
            used_seed = static_cast<std::uint64_t>(trial) * 64 + attempt;
            Rng rng = Rng::for_trial(cfg.seed, used_seed);
            try {
                result = fn(rng);
                ok = true;
            } catch (const ResampleSignal&) {
                continue;
            }
        }
        if (!ok) {
            rep.failures.push_back({used_seed, "resampling exhausted", 1.0});
            rep.max_residual = std::max(rep.max_residual, 1.0);
            sum += 1.0;
            continue;
        }
        rep.max_residual = std::max(rep.max_residual, result.residual);
        sum += result.residual;
        if (result.residual > rep.tol) rep.failures.push_back({used_seed, result.inputs, result.residual});
    }
    rep.mean_residual = trials > 0 ? sum / trials : 0.0;
    std::sort(rep.failures.begin(), rep.failures.end(),
              [](const FailureRecord& a, const FailureRecord& b) { return a.seed < b.seed; });
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

int pick(int requested, int fallback) { return requested > 0 ? requested : fallback; }

// ---- suites ----------------------------------------------------------------

VerificationReport suite_funrel(const RunConfig& cfg) {
    return run_trials("funrel", cfg, pick(cfg.trials, 200), 1e-10, [](Rng& rng) {
        const cplx a = rng.annulus(0.1, 10.0);
        const cplx p{rng.uniform(0.01, 0.3), 0.0};
        const cplx base = theta_short(a, p);
        if (std::abs(base) < 1e-8 * std::max(1.0, std::abs(a)))
            throw ResampleSignal("theta near zero");
        const cplx want = -base / a;
        const double r1 = rel_pair(theta_short(p * a, p), want);
        const double r2 = rel_pair(theta_short(1.0 / a, p), want);
        return TrialResult{std::max(r1, r2),
                           "{\"a\":" + fmt_cplx(a) + ",\"p\":" + fmt_cplx(p) + "}"};
    });
}

VerificationReport suite_quasi(const RunConfig& cfg) {
    return run_trials("quasi", cfg, pick(cfg.trials, 200), 1e-10, [](Rng& rng) {
        const ModularPair b = sample_bases(rng);
        const cplx u = rng.box(-0.6, 0.6, -0.25, 0.25);
        const cplx t = theta1(u, b);
        if (std::abs(t) < 1e-8) throw ResampleSignal("theta1 near zero");
        const double r1 = rel_pair(theta1(u + 1.0 / b.sigma, b), -t);
        const cplx mult = -std::exp(cplx(0.0, -kPi) * b.tau + cplx(0.0, -2.0 * kPi) * b.sigma * u);
        const double r2 = rel_pair(theta1(u + b.tau / b.sigma, b), mult * t);
        return TrialResult{std::max(r1, r2),
                           "{\"u\":" + fmt_cplx(u) + ",\"sigma\":" + fmt_cplx(b.sigma) +
                               ",\"tau\":" + fmt_cplx(b.tau) + "}"};
    });
}

VerificationReport suite_modular(const RunConfig& cfg) {
    return run_trials("modular", cfg, pick(cfg.trials, 100), 1e-10, [](Rng& rng) {
        const ModularPair b(rng.box(0.3, 1.0, -0.1, 0.1), rng.box(-0.3, 0.3, 0.4, 1.2));
        const cplx u = rng.box(-0.5, 0.5, -0.2, 0.2);
        const cplx t = theta1(u, b);
        if (std::abs(t) < 1e-8) throw ResampleSignal("theta1 near zero");
        const ModularPair bT(b.sigma, b.tau + 1.0);
        const double r1 = rel_pair(theta1(u, bT), std::exp(cplx(0.0, kPi / 4.0)) * t);
        const ModularPair bS(b.sigma / b.tau, -1.0 / b.tau);
        cplx root = std::sqrt(cplx(0.0, -1.0) * b.tau);
        if (root.real() < 0.0) root = -root;
        const cplx rhs = cplx(0.0, -1.0) * root *
                         std::exp(cplx(0.0, kPi) * b.sigma * b.sigma * u * u / b.tau) * t;
        const double r2 = rel_pair(theta1(u, bS), rhs);
        return TrialResult{std::max(r1, r2),
                           "{\"u\":" + fmt_cplx(u) + ",\"sigma\":" + fmt_cplx(b.sigma) +
                               ",\"tau\":" + fmt_cplx(b.tau) + "}"};
    });
}

VerificationReport suite_ft(const RunConfig& cfg) {
    const int n_max = pick(cfg.n_max, 8);
    return run_trials("ft", cfg, pick(cfg.trials, 100), 1e-10, [n_max](Rng& rng) {
        const ModularPair bases = sample_bases(rng);
        const int n = rng.uniform_int(0, n_max);
        const cplx t0 = rng.annulus(0.5, 2.0), t1 = rng.annulus(0.5, 2.0),
                   t2 = rng.annulus(0.5, 2.0), t3 = rng.annulus(0.5, 2.0);
        const auto [lhs, rhs] = frenkel_turaev_pair(t0, t1, t2, t3, n, bases);
        return TrialResult{rel_pair(lhs, rhs),
                           "{\"t0\":" + fmt_cplx(t0) + ",\"t1\":" + fmt_cplx(t1) +
                               ",\"t2\":" + fmt_cplx(t2) + ",\"t3\":" + fmt_cplx(t3) +
                               ",\"n\":" + std::to_string(n) + "}"};
    });
}

VerificationReport suite_e87(const RunConfig& cfg) {
    const int n_max = pick(cfg.n_max, 10);
    return run_trials("e87", cfg, pick(cfg.trials, 100), 1e-10, [n_max](Rng& rng) {
        const ModularPair bases = sample_bases(rng);
        const int n = rng.uniform_int(0, n_max);
        const cplx t0 = rng.annulus(0.6, 1.6), t1 = rng.annulus(0.6, 1.6),
                   t2 = rng.annulus(0.6, 1.6);
        const auto [ml, mr] = sum_8e7_pair(t0, t1, t2, n, bases, E87Form::multiplicative);
        const auto [al, ar] = sum_8e7_pair(t0, t1, t2, n, bases, E87Form::additive);
        const double res = std::max({rel_pair(ml, mr), rel_pair(al, ar), rel_pair(ml, al)});
        return TrialResult{res, "{\"t0\":" + fmt_cplx(t0) + ",\"t1\":" + fmt_cplx(t1) +
                                    ",\"t2\":" + fmt_cplx(t2) + ",\"n\":" + std::to_string(n) +
                                    "}"};
    });
}

VerificationReport suite_total_elliptic(const RunConfig& cfg) {
    VerificationReport rep =
        run_trials("total_elliptic", cfg, pick(cfg.trials, 50), 1e-9, [](Rng& rng) {
            const int m = rng.uniform_int(3, 5);
            const VWPSpec spec = sample_balanced_vwp(rng, m);
            const double res =
                std::max(total_ellipticity_residual(spec), vwp_double_period_residual(spec));
            return TrialResult{res, "{\"r\":" + std::to_string(spec.r()) + ",\"t0\":" +
                                        fmt_cplx(spec.t0) + "}"};
        });

    // deliberately unbalanced control must fail loudly
    Rng rng = Rng::for_trial(cfg.seed, 999983);
    VWPSpec control = sample_balanced_vwp(rng, 3);
    control.free_params[0] *= 1.05;
    VWPSpec shifted = control;
    shifted.t0 *= control.bases.p();
    double control_res = 0.0;
    for (int n = 0; n < 4; ++n) {
        try {
            const cplx h0 = h_vwp(control, cplx(static_cast<double>(n), 0.0));
            const cplx h1 = h_vwp(shifted, cplx(static_cast<double>(n), 0.0));
            control_res = std::max(control_res, std::abs(h1 / h0 - 1.0));
        } catch (const PoleError&) {
        }
    }
    if (control_res <= 1e-3) {
        rep.failures.push_back({999983, "unbalanced control did not fail", 1.0});
        rep.max_residual = std::max(rep.max_residual, 1.0);
    }
    return rep;
}

VerificationReport suite_per(const RunConfig& cfg) {
    const int genus = cfg.genus;
    return run_trials("per", cfg, pick(cfg.trials, 100), 1e-10, [genus](Rng& rng) {
        const PeriodMatrix om = sample_period_matrix(rng, genus);
        const Characteristic chi = sample_half_char(rng, genus);
        CVector u(genus);
        for (int j = 0; j < genus; ++j) u[j] = rng.box(-0.5, 0.5, -0.25, 0.25);
        double res = 0.0;
        for (int k = 0; k < genus; ++k) {
            res = std::max(res, quasi_period_residual(u, om, chi, ShiftDirection::lattice, k));
            res = std::max(res, quasi_period_residual(u, om, chi, ShiftDirection::period, k));
        }
        return TrialResult{res, "{\"genus\":" + std::to_string(genus) + ",\"u0\":" +
                                    fmt_cplx(u[0]) + "}"};
    });
}

VerificationReport suite_spmod(const RunConfig& cfg) {
    const int genus = cfg.genus;
    const auto gens = theta_group_generators(genus);
    return run_trials("spmod", cfg, pick(cfg.trials, 20), 1e-9, [genus, gens](Rng& rng) {
        const PeriodMatrix om = sample_period_matrix(rng, genus);
        IMatrix gam = IMatrix(IMatrix::Identity(2 * genus, 2 * genus));
        const int len = rng.uniform_int(1, 4);
        for (int i = 0; i < len; ++i)
            gam = IMatrix(gam * gens[static_cast<std::size_t>(
                                    rng.uniform_int(0, static_cast<int>(gens.size()) - 1))]);
        if (!gamma12_validate(gam)) throw ResampleSignal("composition left the theta group");
        const Characteristic chi = sample_half_char(rng, genus);
        CVector u(genus);
        for (int j = 0; j < genus; ++j) u[j] = rng.box(-0.4, 0.4, -0.2, 0.2);
        const SpTriple moved = sp_act(gam, om, u, chi);
        if (moved.omega.im_min_eigenvalue() < 0.05)
            throw ResampleSignal("transformed Omega too flat");
        const cplx rho = sp_mod_ratio(gam, om, u, chi);
        const double res = std::max(std::abs(std::abs(rho) - 1.0), std::abs(std::pow(rho, 8) - 1.0));
        return TrialResult{res, "{\"genus\":" + std::to_string(genus) + ",\"rho\":" +
                                    fmt_cplx(rho) + "}"};
    });
}

VerificationReport suite_fay(const RunConfig& cfg) {
    const int genus = cfg.genus;
    const GenusFixture fx = make_fixture(genus, cfg.quadrature_nodes, cfg.theta_tol);
    const int trials = pick(cfg.trials, genus == 1 ? 200 : 50);
    const double tol = genus == 1 ? 1e-10 : 1e-6;
    return run_trials("fay", cfg, trials, tol, [fx](Rng& rng) {
        const SurfacePoint a = sample_point(rng, *fx.model);
        const SurfacePoint b = sample_point(rng, *fx.model);
        const SurfacePoint c = sample_point(rng, *fx.model);
        const SurfacePoint d = sample_point(rng, *fx.model);
        const CVector u = sample_z(rng, *fx.model);
        const double res = fay_residual(*fx.model, *fx.bracket, u, a, b, c, d);
        return TrialResult{res, "{\"a\":" + fmt_cplx(a.w) + ",\"b\":" + fmt_cplx(b.w) +
                                    ",\"c\":" + fmt_cplx(c.w) + ",\"d\":" + fmt_cplx(d.w) + "}"};
    });
}

VerificationReport suite_theorem(const RunConfig& cfg) {
    const int genus = cfg.genus;
    const GenusFixture fx = make_fixture(genus, cfg.quadrature_nodes, cfg.theta_tol);
    const int trials = pick(cfg.trials, genus == 1 ? 100 : 25);
    const double tol = genus == 1 ? 1e-9 : 1e-5;
    const int n_max = pick(cfg.n_max, genus == 1 ? 10 : 4);
    return run_trials("theorem", cfg, trials, tol, [fx, n_max](Rng& rng) {
        const int n = rng.uniform_int(0, n_max);
        const SummandConfig config = sample_config(rng, fx, n);
        const SumPair pair = theorem_sum_pair(config);
        const double res = std::max(pair.scaled_residual, induction_step_residual(config));
        return TrialResult{res, config.to_json().dump()};
    });
}

VerificationReport suite_sum2(const RunConfig& cfg) {
    const int genus = cfg.genus;
    const GenusFixture fx = make_fixture(genus, cfg.quadrature_nodes, cfg.theta_tol);
    const double tol = genus == 1 ? 1e-9 : 1e-5;
    const int n_max = pick(cfg.n_max, 5);
    return run_trials("sum2", cfg, pick(cfg.trials, 50), tol, [fx, n_max](Rng& rng) {
        const int n = rng.uniform_int(1, n_max);
        SummandConfig config = sample_config(rng, fx, n);
        const double res = degenerate_sum_check(config, DegenerateMode::sum2);
        // ratio-form invariance under lattice and period shifts of a z_k
        config.a[config.n] = config.b[config.n];
        const cplx base = sum2_value(config);
        SummandConfig latt = config;
        latt.z[0][0] += 1.0;
        SummandConfig per = config;
        per.z[std::min(1, config.n)] += fx.model->omega().omega().col(0);
        const double shift_res =
            std::max(std::abs(sum2_value(latt) - base), std::abs(sum2_value(per) - base));
        return TrialResult{std::max(res, shift_res), config.to_json().dump()};
    });
}

VerificationReport suite_sum3(const RunConfig& cfg) {
    const int genus = cfg.genus;
    const GenusFixture fx = make_fixture(genus, cfg.quadrature_nodes, cfg.theta_tol);
    const double tol = genus == 1 ? 1e-9 : 1e-5;
    const int n_max = pick(cfg.n_max, 5);
    return run_trials("sum3", cfg, pick(cfg.trials, 50), tol, [fx, n_max](Rng& rng) {
        const int n = rng.uniform_int(1, n_max);
        SummandConfig config = sample_config(rng, fx, n);
        const double res = degenerate_sum_check(config, DegenerateMode::sum3);
        return TrialResult{res, config.to_json().dump()};
    });
}

VerificationReport suite_cor1(const RunConfig& cfg) {
    const int genus = cfg.genus;
    const GenusFixture fx = make_fixture(genus, cfg.quadrature_nodes, cfg.theta_tol);
    const double tol = genus == 1 ? 1e-9 : 1e-5;
    const int n_max = pick(cfg.n_max, 4);
    return run_trials("cor1", cfg, pick(cfg.trials, 50), tol, [fx, n_max, tol](Rng& rng) {
        const int n = rng.uniform_int(1, n_max);
        std::vector<SurfacePoint> xs, as;
        for (int k = 0; k <= n; ++k) {
            xs.push_back(sample_point(rng, *fx.model));
            as.push_back(sample_point(rng, *fx.model));
        }
        const SurfacePoint d0 = sample_point(rng, *fx.model);
        const CVector u0 = sample_z(rng, *fx.model);
        const double identity_res = corollary1_check(*fx.model, *fx.bracket, u0, xs, as, d0);
        // structural argument-sum checks carry a 1e-12 budget; scale them onto
        // the suite tolerance so a violation registers as a failure
        const double structural = corollary1_structural_defect(*fx.model, u0, xs, as, d0);
        const double res = std::max(identity_res, structural * (tol / 1e-12));
        return TrialResult{res, "{\"n\":" + std::to_string(n) + ",\"u0\":" + fmt_cplx(u0[0]) +
                                    "}"};
    });
}

VerificationReport suite_cor2(const RunConfig& cfg) {
    const int genus = cfg.genus;
    const GenusFixture fx = make_fixture(genus, cfg.quadrature_nodes, cfg.theta_tol);
    const double tol = genus == 1 ? 1e-9 : 1e-5;
    const int n_max = pick(cfg.n_max, genus == 1 ? 6 : 3);
    const int trials = pick(cfg.trials, genus == 1 ? 50 : 25);
    return run_trials("cor2", cfg, trials, tol, [fx, n_max](Rng& rng) {
        const int n = rng.uniform_int(1, n_max);
        std::vector<SurfacePoint> xs;
        for (int k = 0; k <= n; ++k) xs.push_back(sample_point(rng, *fx.model));
        const SurfacePoint a = sample_point(rng, *fx.model);
        const SurfacePoint c = sample_point(rng, *fx.model);
        const CVector z0 = sample_z(rng, *fx.model);
        const double res = corollary2_check(*fx.model, *fx.bracket, z0, a, c, xs);
        return TrialResult{res, "{\"n\":" + std::to_string(n) + ",\"z0\":" + fmt_cplx(z0[0]) +
                                    "}"};
    });
}

VerificationReport suite_telescope(const RunConfig& cfg) {
    return run_trials("telescope", cfg, pick(cfg.trials, 500), 1e-13, [](Rng& rng) {
        const int len = rng.uniform_int(1, 20);
        TelescopeSeq seq;
        for (int i = 0; i < len; ++i) {
            seq.x.push_back(rng.box(-2.0, 2.0, -2.0, 2.0));
            seq.y.push_back(rng.box(-2.0, 2.0, -2.0, 2.0));
        }
        const auto [lhs, rhs] = telescope_pair(seq);
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
        return TrialResult{std::abs(lhs - rhs) / scale,
                           "{\"len\":" + std::to_string(len) + "}"};
    });
}

} // namespace

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j;
    j["schema"] = "1";
    j["identity"] = identity;
    j["genus"] = genus;
    j["seed"] = seed;
    j["trials"] = trials;
    j["tol"] = tol;
    j["max_residual"] = max_residual;
    j["mean_residual"] = mean_residual;
    j["passed"] = passed();
    nlohmann::json fails = nlohmann::json::array();
    for (const FailureRecord& f : failures)
        fails.push_back({{"seed", f.seed}, {"inputs", f.inputs}, {"residual", f.residual}});
    j["failures"] = fails;
    j["wall_time_s"] = wall_time_s;
    return j;
}

const std::vector<std::string>& verify_identities() {
    static const std::vector<std::string> ids{
        "telescope", "funrel", "quasi",   "modular", "ft",   "e87",  "total_elliptic", "per",
        "spmod",     "fay",    "theorem", "sum2",    "sum3", "cor1", "cor2"};
    return ids;
}

VerificationReport run_verify(const std::string& identity, const RunConfig& cfg) {
    if (identity == "funrel") return suite_funrel(cfg);
    if (identity == "quasi") return suite_quasi(cfg);
    if (identity == "modular") return suite_modular(cfg);
    if (identity == "ft") return suite_ft(cfg);
    if (identity == "e87") return suite_e87(cfg);
    if (identity == "total_elliptic") return suite_total_elliptic(cfg);
    if (identity == "per") return suite_per(cfg);
    if (identity == "spmod") return suite_spmod(cfg);
    if (identity == "fay") return suite_fay(cfg);
    if (identity == "theorem") return suite_theorem(cfg);
    if (identity == "sum2") return suite_sum2(cfg);
    if (identity == "sum3") return suite_sum3(cfg);
    if (identity == "cor1") return suite_cor1(cfg);
    if (identity == "cor2") return suite_cor2(cfg);
    if (identity == "telescope") return suite_telescope(cfg);
    throw DomainError("run_verify: unknown identity '" + identity + "'");
}

std::vector<VerificationReport> run_verify_all(const RunConfig& cfg) {
    std::vector<VerificationReport> reports;
    for (const std::string& id : verify_identities()) reports.push_back(run_verify(id, cfg));
    return reports;
}

} // namespace tsum
