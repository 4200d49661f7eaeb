#include "tsum/summation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "tsum/errors.hpp"

namespace tsum {

namespace {

bool same_point(const SurfacePoint& p, const SurfacePoint& q, SurfaceModel::Kind kind) {
    if (kind == SurfaceModel::Kind::torus) return p.w == q.w;
    return p.w == q.w && p.sheet == q.sheet;
}

// bracket with the fuzzing guard: exact zeros pass through (deliberate
// degeneracies), accidental near-zeros raise a resample signal
ScaledComplex checked_bracket(const OddBracketConfig& bracket, const CVector& w) {
    const cplx val = bracket(w);
    if (val == cplx(0.0, 0.0)) return ScaledComplex::zero();
    const double peak = std::exp(kPi * w.imag().dot(bracket.omega.im_inverse() * w.imag()));
    if (std::abs(val) < 1e-9 * peak) throw ResampleSignal("bracket below scale threshold");
    return ScaledComplex(val);
}

struct TermAbel {
    CVector vac, vbd, vbc, vad, vcd, vab, vcb;
};

TermAbel abel_data(const SummandConfig& cfg, int k) {
    const SurfaceModel& m = *cfg.model;
    TermAbel t;
    t.vac = m.abel_map(cfg.a[k], cfg.c[k]);
    t.vbd = m.abel_map(cfg.b[k], cfg.d[k]);
    t.vbc = m.abel_map(cfg.b[k], cfg.c[k]);
    t.vad = m.abel_map(cfg.a[k], cfg.d[k]);
    t.vcd = m.abel_map(cfg.c[k], cfg.d[k]);
    t.vab = m.abel_map(cfg.a[k], cfg.b[k]);
    t.vcb = m.abel_map(cfg.c[k], cfg.b[k]);
    return t;
}

double residual_scaled(const ScaledComplex& defect, double scale_log2) {
    return std::exp2(defect.log2_abs() - scale_log2);
}

} // namespace

void SummandConfig::validate(bool allow_coincidence) const {
    if (!model || !bracket) throw DomainError("SummandConfig: model and bracket must be set");
    const std::size_t want = static_cast<std::size_t>(n) + 1;
    if (z.size() != want || a.size() != want || b.size() != want || c.size() != want ||
        d.size() != want)
        throw DomainError("SummandConfig: all lists must have n+1 entries");
    for (const CVector& zk : z)
        if (zk.size() != model->genus()) throw DomainError("SummandConfig: z_k has wrong genus");
    for (const auto* pts : {&a, &b, &c, &d})
        for (const SurfacePoint& p : *pts) model->validate_point(p);
    if (allow_coincidence) return;
    std::vector<const SurfacePoint*> all;
    for (const auto* pts : {&a, &b, &c, &d})
        for (const SurfacePoint& p : *pts) all.push_back(&p);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (same_point(*all[i], *all[j], model->kind()))
                throw DomainError("SummandConfig: the 4(n+1) points must be distinct");
}

ScaledComplex g_term(const SummandConfig& cfg, int k) {
    const TermAbel t = abel_data(cfg, k);
    const OddBracketConfig& br = *cfg.bracket;
    return checked_bracket(br, cfg.z[k]) * checked_bracket(br, cfg.z[k] + t.vac + t.vbd) *
           checked_bracket(br, t.vcd) * checked_bracket(br, t.vab);
}

ScaledComplex h_term(const SummandConfig& cfg, int k) {
    const TermAbel t = abel_data(cfg, k);
    const OddBracketConfig& br = *cfg.bracket;
    return checked_bracket(br, cfg.z[k] + t.vac) * checked_bracket(br, cfg.z[k] + t.vbd) *
           checked_bracket(br, t.vcb) * checked_bracket(br, t.vad);
}

ScaledComplex lead_term(const SummandConfig& cfg, int k) {
    const TermAbel t = abel_data(cfg, k);
    const OddBracketConfig& br = *cfg.bracket;
    return checked_bracket(br, cfg.z[k] + t.vbc) * checked_bracket(br, cfg.z[k] + t.vad) *
           checked_bracket(br, t.vac) * checked_bracket(br, t.vbd);
}

SumPair theorem_sum_pair(const SummandConfig& cfg) {
    cfg.validate(true);
    const int n = cfg.n;
    std::vector<ScaledComplex> g(n + 1), h(n + 1), lead(n + 1);
    for (int k = 0; k <= n; ++k) {
        g[k] = g_term(cfg, k);
        h[k] = h_term(cfg, k);
        lead[k] = lead_term(cfg, k);
    }

    std::vector<ScaledComplex> gpre(n + 2), hsuf(n + 2);
    gpre[0] = ScaledComplex::one();
    for (int k = 0; k <= n; ++k) gpre[k + 1] = gpre[k] * g[k];
    hsuf[n + 1] = ScaledComplex::one();
    for (int k = n; k >= 0; --k) hsuf[k] = hsuf[k + 1] * h[k];

    ScaledComplex lhs = ScaledComplex::zero();
    double scale_log2 = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        const ScaledComplex term = lead[k] * gpre[k] * hsuf[k + 1];
        scale_log2 = std::max(scale_log2, term.log2_abs());
        lhs = lhs + term;
    }
    const ScaledComplex rhs = gpre[n + 1] - hsuf[0];
    scale_log2 = std::max({scale_log2, lhs.log2_abs(), rhs.log2_abs()});

    SumPair out;
    out.lhs = lhs.value();
    out.rhs = rhs.value();
    out.scaled_residual = residual_scaled(lhs - rhs, scale_log2);
    return out;
}

double induction_step_residual(const SummandConfig& cfg) {
    cfg.validate(true);
    double worst = 0.0;
    for (int k = 0; k <= cfg.n; ++k) {
        const ScaledComplex g = g_term(cfg, k);
        const ScaledComplex h = h_term(cfg, k);
        const ScaledComplex lead = lead_term(cfg, k);
        const double scale_log2 = std::max({g.log2_abs(), h.log2_abs(), lead.log2_abs()});
        worst = std::max(worst, residual_scaled(lead + h - g, scale_log2));
    }
    return worst;
}

std::pair<cplx, cplx> telescope_pair(const TelescopeSeq& seq) {
    if (seq.x.empty() || seq.x.size() != seq.y.size())
        throw DomainError("telescope_pair: x and y must be nonempty and of equal length");
    const int n = static_cast<int>(seq.x.size()) - 1;
    std::vector<ScaledComplex> xpre(n + 2), ysuf(n + 2);
    xpre[0] = ScaledComplex::one();
    for (int k = 0; k <= n; ++k) xpre[k + 1] = xpre[k] * ScaledComplex(seq.x[k]);
    ysuf[n + 1] = ScaledComplex::one();
    for (int k = n; k >= 0; --k) ysuf[k] = ysuf[k + 1] * ScaledComplex(seq.y[k]);

    ScaledComplex lhs = ScaledComplex::zero();
    for (int k = 0; k <= n; ++k)
        lhs = lhs + ScaledComplex(seq.x[k] - seq.y[k]) * xpre[k] * ysuf[k + 1];
    // rhs products in matching order so x = y cancels exactly
    ScaledComplex ypre = ScaledComplex::one();
    for (int k = 0; k <= n; ++k) ypre = ypre * ScaledComplex(seq.y[k]);
    return {lhs.value(), (xpre[n + 1] - ypre).value()};
}

cplx sum2_value(const SummandConfig& cfg) {
    cfg.validate(true);
    const int n = cfg.n;
    ScaledComplex sum = ScaledComplex::zero();
    ScaledComplex prefix = ScaledComplex::one(); // prod_{j<k} g_j / h_j
    for (int k = 0; k <= n; ++k) {
        const ScaledComplex h = h_term(cfg, k);
        if (h.is_zero()) throw ResampleSignal("sum2_value: h_k vanished");
        // the leading ratio carries [v(b_k,c_k)] = -[v(c_k,b_k)] downstairs
        sum = sum + lead_term(cfg, k) / (-h) * prefix;
        prefix = prefix * (g_term(cfg, k) / h);
    }
    return sum.value();
}

double degenerate_sum_check(SummandConfig cfg, DegenerateMode mode) {
    if (mode == DegenerateMode::sum2) {
        cfg.a[cfg.n] = cfg.b[cfg.n]; // [v(a_N, b_N)] = 0 exactly
        cfg.validate(true);
        return std::abs(sum2_value(cfg) - 1.0);
    }

    // sum3: c_0 = b_0 forces h_0 = 0; the rewritten identity never divides by it
    cfg.c[0] = cfg.b[0];
    cfg.validate(true);
    const int n = cfg.n;
    const ScaledComplex g0 = g_term(cfg, 0);
    if (g0.is_zero()) throw ResampleSignal("degenerate_sum_check: g_0 vanished");

    ScaledComplex lhs = ScaledComplex::zero();
    ScaledComplex prefix = ScaledComplex::one(); // prod_{j=0}^{k-1} g_j / h_{j+1}
    double scale_log2 = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        const ScaledComplex term = lead_term(cfg, k) / g0 * prefix;
        scale_log2 = std::max(scale_log2, term.log2_abs());
        lhs = lhs + term;
        if (k < n) {
            const ScaledComplex hk1 = h_term(cfg, k + 1);
            if (hk1.is_zero()) throw ResampleSignal("degenerate_sum_check: h_{k+1} vanished");
            prefix = prefix * (g_term(cfg, k) / hk1);
        }
    }
    ScaledComplex rhs = ScaledComplex::one();
    for (int k = 1; k <= n; ++k) {
        const ScaledComplex hk = h_term(cfg, k);
        if (hk.is_zero()) throw ResampleSignal("degenerate_sum_check: h_k vanished");
        rhs = rhs * (g_term(cfg, k) / hk);
    }
    scale_log2 = std::max({scale_log2, lhs.log2_abs(), rhs.log2_abs()});
    return residual_scaled(lhs - rhs, scale_log2);
}

double corollary1_check(const SurfaceModel& model, const OddBracketConfig& bracket,
                        const CVector& u0, const std::vector<SurfacePoint>& xs,
                        const std::vector<SurfacePoint>& as, const SurfacePoint& d0) {
    if (xs.size() != as.size() || xs.empty())
        throw DomainError("corollary1_check: xs and as must be nonempty and of equal length");
    const int n = static_cast<int>(xs.size()) - 1;
    const auto br = [&](const CVector& w) { return checked_bracket(bracket, w); };

    std::vector<CVector> v(n + 1), u1(n + 1);
    for (int k = 0; k <= n; ++k) {
        v[k] = model.abel_map(xs[0], xs[k]);
        u1[k] = model.abel_map(xs[k], as[k]);
    }
    const CVector u2 = model.abel_map(d0, xs[0]);

    const ScaledComplex br_u0 = br(u0);
    const ScaledComplex head_den = br(u0 - u1[0] - u2) * br(u1[0]);
    if (br_u0.is_zero() || head_den.is_zero())
        throw ResampleSignal("corollary1_check: head denominator vanished");

    ScaledComplex lhs = ScaledComplex::zero();
    ScaledComplex prefix = ScaledComplex::one();
    double scale_log2 = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        const ScaledComplex term =
            br(u0 + 2.0 * v[k]) / br_u0 * (br(u0 - u1[k] - u2) * br(u1[k]) / head_den) * prefix;
        scale_log2 = std::max(scale_log2, term.log2_abs());
        lhs = lhs + term;
        if (k < n) {
            const ScaledComplex num = br(u0 + v[k]) * br(u0 - u1[k] - u2 + v[k]) *
                                      br(u1[k] + v[k]) * br(u2 + v[k]);
            const ScaledComplex den = br(v[k + 1]) * br(u1[k + 1] + u2 + v[k + 1]) *
                                      br(u0 - u1[k + 1] + v[k + 1]) * br(u0 - u2 + v[k + 1]);
            if (den.is_zero())
                throw ResampleSignal("corollary1_check: product denominator vanished");
            prefix = prefix * (num / den);
        }
    }

    ScaledComplex rhs = ScaledComplex::one();
    for (int k = 1; k <= n; ++k) {
        const ScaledComplex num =
            br(u0 + v[k]) * br(u0 - u1[k] - u2 + v[k]) * br(u1[k] + v[k]) * br(u2 + v[k]);
        const ScaledComplex den =
            br(v[k]) * br(u1[k] + u2 + v[k]) * br(u0 - u1[k] + v[k]) * br(u0 - u2 + v[k]);
        if (den.is_zero()) throw ResampleSignal("corollary1_check: rhs denominator vanished");
        rhs = rhs * (num / den);
    }
    scale_log2 = std::max({scale_log2, lhs.log2_abs(), rhs.log2_abs()});
    return residual_scaled(lhs - rhs, scale_log2);
}

double corollary1_structural_defect(const SurfaceModel& model, const CVector& u0,
                                    const std::vector<SurfacePoint>& xs,
                                    const std::vector<SurfacePoint>& as,
                                    const SurfacePoint& d0) {
    const int n = static_cast<int>(xs.size()) - 1;
    const CVector u2 = model.abel_map(d0, xs[0]);
    double worst = 0.0;
    for (int k = 1; k <= n; ++k) {
        const CVector v = model.abel_map(xs[0], xs[k]);
        const CVector u1 = model.abel_map(xs[k], as[k]);
        const std::array<CVector, 4> num{u0 + v, u0 - u1 - u2 + v, u1 + v, u2 + v};
        const std::array<CVector, 4> den{v, u1 + u2 + v, u0 - u1 + v, u0 - u2 + v};
        CVector num_sum = CVector::Zero(u0.size()), den_sum = CVector::Zero(u0.size());
        for (int i = 0; i < 4; ++i) {
            num_sum += num[i];
            den_sum += den[i];
            worst = std::max(worst, (num[i] + den[i] - u0 - 2.0 * v).norm());
        }
        worst = std::max(worst, (num_sum - den_sum).norm());
    }
    return worst;
}

double corollary2_check(const SurfaceModel& model, const OddBracketConfig& bracket,
                        const CVector& z0, const SurfacePoint& a, const SurfacePoint& c,
                        const std::vector<SurfacePoint>& xs) {
    if (xs.size() < 2) throw DomainError("corollary2_check: need at least x_0 and x_1");
    const int n = static_cast<int>(xs.size()) - 1;
    const auto br = [&](const CVector& w) { return checked_bracket(bracket, w); };

    const auto boundary = [&](int k) {
        const CVector vax = model.abel_map(a, xs[k]);
        const CVector vcx = model.abel_map(c, xs[k]);
        const ScaledComplex den = br(z0 + vcx) * br(vax);
        if (den.is_zero()) throw ResampleSignal("corollary2_check: boundary denominator vanished");
        return br(z0 + vax) * br(vcx) / den;
    };

    ScaledComplex sum = ScaledComplex::zero();
    const CVector vac = model.abel_map(a, c);
    for (int k = 1; k <= n; ++k) {
        const CVector vcx_prev = model.abel_map(c, xs[k - 1]);
        const CVector vax_k = model.abel_map(a, xs[k]);
        const ScaledComplex num = br(z0) * br(z0 + vcx_prev + vax_k) * br(vac) *
                                  br(model.abel_map(xs[k - 1], xs[k]));
        const ScaledComplex den = br(z0 + vcx_prev) * br(z0 + model.abel_map(c, xs[k])) *
                                  br(model.abel_map(a, xs[k - 1])) * br(vax_k);
        if (den.is_zero()) throw ResampleSignal("corollary2_check: term denominator vanished");
        sum = sum + num / den;
    }

    const ScaledComplex diff = boundary(n) - boundary(0);

    const CVector vcx0 = model.abel_map(c, xs[0]);
    const CVector vaxn = model.abel_map(a, xs[n]);
    const ScaledComplex closed_den = br(z0 + vcx0) * br(z0 + model.abel_map(c, xs[n])) *
                                     br(model.abel_map(a, xs[0])) * br(vaxn);
    if (closed_den.is_zero())
        throw ResampleSignal("corollary2_check: closed denominator vanished");
    const ScaledComplex closed =
        br(z0) * br(z0 + vcx0 + vaxn) * br(vac) * br(model.abel_map(xs[0], xs[n])) / closed_den;

    const double scale_log2 =
        std::max({sum.log2_abs(), diff.log2_abs(), closed.log2_abs(), 0.0});
    return std::max({residual_scaled(sum - diff, scale_log2),
                     residual_scaled(diff - closed, scale_log2),
                     residual_scaled(sum - closed, scale_log2)});
}

namespace {

nlohmann::json cvec_to_json(const CVector& v) {
    nlohmann::json j = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) j.push_back({v[i].real(), v[i].imag()});
    return j;
}

CVector cvec_from_json(const nlohmann::json& j) {
    CVector v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i)
        v[i] = cplx(j.at(i).at(0).get<double>(), j.at(i).at(1).get<double>());
    return v;
}

nlohmann::json point_to_json(const SurfacePoint& p) {
    return {{"w", {p.w.real(), p.w.imag()}}, {"sheet", p.sheet}};
}

SurfacePoint point_from_json(const nlohmann::json& j) {
    const auto& w = j.at("w");
    return {cplx(w.at(0).get<double>(), w.at(1).get<double>()), j.value("sheet", 1)};
}

} // namespace

nlohmann::json SummandConfig::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["model"] = model ? model->to_json() : nlohmann::json();
    nlohmann::json zs = nlohmann::json::array();
    for (const CVector& zk : z) zs.push_back(cvec_to_json(zk));
    j["z"] = zs;
    const std::pair<const char*, const std::vector<SurfacePoint>*> lists[] = {
        {"a", &a}, {"b", &b}, {"c", &c}, {"d", &d}};
    for (const auto& [name, pts] : lists) {
        nlohmann::json arr = nlohmann::json::array();
        for (const SurfacePoint& p : *pts) arr.push_back(point_to_json(p));
        j[name] = arr;
    }
    return j;
}

SummandConfig SummandConfig::from_json(const nlohmann::json& j,
                                       std::shared_ptr<const SurfaceModel> model) {
    SummandConfig cfg;
    cfg.n = j.at("n").get<int>();
    if (!model) {
        if (!j.contains("model") || j["model"].is_null())
            throw DomainError("SummandConfig::from_json: no model inline or by reference");
        model = std::make_shared<const SurfaceModel>(SurfaceModel::from_json(j["model"]));
    }
    cfg.model = model;
    cfg.bracket = std::make_shared<const OddBracketConfig>(pick_odd_char(model->omega()));
    for (const auto& zj : j.at("z")) cfg.z.push_back(cvec_from_json(zj));
    for (const auto& pj : j.at("a")) cfg.a.push_back(point_from_json(pj));
    for (const auto& pj : j.at("b")) cfg.b.push_back(point_from_json(pj));
    for (const auto& pj : j.at("c")) cfg.c.push_back(point_from_json(pj));
    for (const auto& pj : j.at("d")) cfg.d.push_back(point_from_json(pj));
    return cfg;
}

} // namespace tsum
