#include "tsum/surface.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tsum/errors.hpp"
#include "tsum/scaled.hpp"

namespace tsum {

namespace {

constexpr double kBranchClearance = 1e-6;

// y on the branch continued just above the real axis, normalized y > 0 for
// x > e_6: crossing above each branch point multiplies by i, so on the
// segment with k branch points to the left, y = i^(6-k) |y|.
cplx y_upper(const std::array<double, 6>& e, double x) {
    int k = 0;
    double mag2 = 1.0;
    for (double ei : e) {
        if (ei < x) ++k;
        mag2 *= std::abs(x - ei);
    }
    static const cplx phases[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    return phases[(6 - k) % 4] * std::sqrt(mag2);
}

// Gauss-Legendre nodes/weights on (0,1) by Newton iteration on P_n.
void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = 0.5 * (1.0 - z);
        x[n - 1 - i] = 0.5 * (1.0 + z);
        w[i] = 1.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

// int_{e_branch}^{x_t} x^{m-1}/y dx with an inverse-sqrt singularity at the
// branch endpoint, absorbed by x = e + s t^2.
cplx branch_to_point(const std::array<double, 6>& e, double e_branch, double x_t, int m,
                     int nodes) {
    const double s = x_t - e_branch;
    std::vector<double> t, w;
    gauss_legendre01(nodes, t, w);
    cplx total{0.0, 0.0};
    for (int i = 0; i < nodes; ++i) {
        const double x = e_branch + s * t[i] * t[i];
        const double f = (m == 1) ? 1.0 : x;
        total += w[i] * 2.0 * s * t[i] * f / y_upper(e, x);
    }
    return total;
}

} // namespace

cplx hyperelliptic_segment_integral(const std::array<double, 6>& e, int j, int m, int nodes,
                                    int sheet_sign) {
    if (j < 1 || j > 5 || (m != 1 && m != 2))
        throw DomainError("hyperelliptic_segment_integral: j in 1..5, m in {1,2}");
    const double a = e[j - 1], b = e[j];
    const double mid = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx total{0.0, 0.0};
    for (int k = 1; k <= nodes; ++k) {
        const double th = (2.0 * k - 1.0) * kPi / (2.0 * nodes);
        const double x = mid + h * std::cos(th);
        const double f = (m == 1) ? 1.0 : x;
        total += kPi / nodes * h * std::sin(th) * f / y_upper(e, x);
    }
    return static_cast<double>(sheet_sign) * total;
}

SurfaceModel SurfaceModel::make_torus(cplx tau) {
    if (!(tau.imag() > 0.0)) throw DomainError("make_torus: Im(tau) must be positive");
    SurfaceModel m;
    m.kind_ = Kind::torus;
    m.tau_ = tau;
    CMatrix om(1, 1);
    om(0, 0) = tau;
    m.omega_.emplace(om);
    m.symmetry_defect_ = 0.0;
    m.a_period_defect_ = 0.0;
    m.quadrature_shift_ = 0.0;
    m.nodes_used_ = 0;
    return m;
}

namespace {

struct PeriodPair {
    Eigen::Matrix2cd pa; // columns A_1, A_2; rows differentials dx/y, x dx/y
    Eigen::Matrix2cd pb; // columns B_1, B_2
};

// A_1 = 2 J_1, A_2 = 2 J_3; B_1 = 2 (J_2 + J_4), B_2 = 2 J_4. The naive
// "through the last cut" path for B_1 is homologous to the canonical cycle
// plus A_2; the J_3 contribution drops out.
PeriodPair compute_periods(const std::array<double, 6>& e, int nodes) {
    cplx J[6][3];
    for (int j = 1; j <= 5; ++j)
        for (int m = 1; m <= 2; ++m) J[j][m] = hyperelliptic_segment_integral(e, j, m, nodes);
    PeriodPair pp;
    for (int m = 1; m <= 2; ++m) {
        pp.pa(m - 1, 0) = 2.0 * J[1][m];
        pp.pa(m - 1, 1) = 2.0 * J[3][m];
        pp.pb(m - 1, 0) = 2.0 * (J[2][m] + J[4][m]);
        pp.pb(m - 1, 1) = 2.0 * J[4][m];
    }
    return pp;
}

} // namespace

SurfaceModel SurfaceModel::make_hyperelliptic2(const std::array<double, 6>& e, int nodes) {
    for (int i = 0; i + 1 < 6; ++i)
        if (!(e[i] < e[i + 1]))
            throw DomainError("make_hyperelliptic2: branch points must be distinct and sorted");
    if (nodes < 4) throw DomainError("make_hyperelliptic2: need at least 4 quadrature nodes");

    SurfaceModel m;
    m.kind_ = Kind::hyperelliptic2;
    m.e_ = e;

    const int max_nodes = 8192;
    PeriodPair prev = compute_periods(e, nodes);
    int n = nodes;
    double shift = 0.0;
    while (true) {
        const PeriodPair next = compute_periods(e, 2 * n);
        shift = std::max((next.pa - prev.pa).cwiseAbs().maxCoeff(),
                         (next.pb - prev.pb).cwiseAbs().maxCoeff());
        n *= 2;
        prev = next;
        if (shift < 1e-9) break;
        if (n >= max_nodes)
            throw ConstructionError(
                "make_hyperelliptic2: quadrature did not converge (last doubling moved periods by " +
                std::to_string(shift) + ")");
    }
    m.nodes_used_ = n;
    m.quadrature_shift_ = shift;

    Eigen::FullPivLU<Eigen::Matrix2cd> lu(prev.pa);
    if (!lu.isInvertible())
        throw ConstructionError("make_hyperelliptic2: A-period matrix is singular");
    m.normalization_ = lu.inverse();
    Eigen::Matrix2cd omega = m.normalization_ * prev.pb;

    m.symmetry_defect_ = std::abs(omega(0, 1) - omega(1, 0));
    if (m.symmetry_defect_ > 1e-8)
        throw ConstructionError("make_hyperelliptic2: period matrix symmetry defect " +
                                std::to_string(m.symmetry_defect_) + " exceeds 1e-8");
    omega(0, 1) = omega(1, 0) = 0.5 * (omega(0, 1) + omega(1, 0));

    Eigen::Matrix2d im = omega.imag();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (im + im.transpose().eval()));
    if (es.eigenvalues().minCoeff() <= 0.0) {
        if (es.eigenvalues().maxCoeff() < 0.0) {
            // globally reversed B orientation: B -> -B flips Omega only; the
            // A-normalization (and with it the Abel map) is untouched
            omega = -omega;
        } else {
            throw ConstructionError(
                "make_hyperelliptic2: Im(Omega) is indefinite; cycle basis is wrong");
        }
    }

    m.a_period_defect_ =
        (m.normalization_ * prev.pa - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    m.omega_.emplace(CMatrix(omega));
    return m;
}

void SurfaceModel::validate_point(const SurfacePoint& p) const {
    if (kind_ == Kind::torus) return;
    if (p.w.imag() != 0.0)
        throw DomainError("SurfacePoint: hyperelliptic points have real x-coordinates");
    if (p.sheet != 1 && p.sheet != -1)
        throw DomainError("SurfacePoint: sheet must be +1 or -1");
    for (double ei : e_)
        if (std::abs(p.w.real() - ei) <= kBranchClearance)
            throw DomainError("SurfacePoint: x within 1e-6 of a branch point");
}

CVector SurfaceModel::potential(double x, int sheet) const {
    // integral of the unnormalized differentials from e_1 to x along the
    // upper branch, split at every branch point crossed
    Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
    for (int mm = 1; mm <= 2; ++mm) {
        cplx total{0.0, 0.0};
        if (x > e_[0]) {
            int last = 0; // index of last branch point <= x
            for (int i = 1; i < 6; ++i)
                if (e_[i] < x) last = i;
            for (int j = 1; j <= last; ++j)
                total += hyperelliptic_segment_integral(e_, j, mm, nodes_used_);
            total += branch_to_point(e_, e_[last], x, mm, nodes_used_);
        } else {
            total = branch_to_point(e_, e_[0], x, mm, nodes_used_);
        }
        acc[mm - 1] = total;
    }
    return static_cast<double>(sheet) * (normalization_ * acc);
}

CVector SurfaceModel::abel_map(const SurfacePoint& a, const SurfacePoint& b) const {
    if (kind_ == Kind::torus) {
        CVector v(1);
        v[0] = b.w - a.w;
        return v;
    }
    validate_point(a);
    validate_point(b);
    return potential(b.w.real(), b.sheet) - potential(a.w.real(), a.sheet);
}

nlohmann::json SurfaceModel::to_json() const {
    nlohmann::json j;
    j["schema"] = "1";
    j["g"] = genus();
    const CMatrix& om = omega_->omega();
    nlohmann::json omj = nlohmann::json::array();
    for (int r = 0; r < om.rows(); ++r)
        for (int c = 0; c < om.cols(); ++c)
            omj.push_back({om(r, c).real(), om(r, c).imag()});
    j["Omega"] = omj;
    nlohmann::json certs;
    certs["symmetry_defect"] = symmetry_defect_;
    certs["im_omega_min_eig"] = im_min_eigenvalue();
    if (kind_ == Kind::torus) {
        j["kind"] = "torus";
        j["tau"] = {tau_.real(), tau_.imag()};
    } else {
        j["kind"] = "hyperelliptic2";
        j["branch_points"] = e_;
        j["quadrature_nodes"] = nodes_used_;
        certs["a_period_defect"] = a_period_defect_;
        certs["quadrature_shift"] = quadrature_shift_;
    }
    j["certificates"] = certs;
    return j;
}

SurfaceModel SurfaceModel::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    SurfaceModel m;
    if (kind == "torus") {
        const auto t = j.at("tau");
        m = make_torus({t.at(0).get<double>(), t.at(1).get<double>()});
    } else if (kind == "hyperelliptic2") {
        std::array<double, 6> e{};
        const auto& bp = j.at("branch_points");
        for (int i = 0; i < 6; ++i) e[i] = bp.at(i).get<double>();
        int nodes = 64;
        if (j.contains("quadrature_nodes")) nodes = std::max(4, j["quadrature_nodes"].get<int>() / 2);
        m = make_hyperelliptic2(e, nodes);
    } else {
        throw DomainError("SurfaceModel::from_json: unknown kind '" + kind + "'");
    }
    // stored Omega must match the reconstruction
    if (j.contains("Omega")) {
        const auto& omj = j["Omega"];
        const CMatrix& om = m.omega().omega();
        int idx = 0;
        for (int r = 0; r < om.rows(); ++r)
            for (int c = 0; c < om.cols(); ++c, ++idx) {
                const cplx stored{omj.at(idx).at(0).get<double>(), omj.at(idx).at(1).get<double>()};
                if (std::abs(stored - om(r, c)) > 1e-7)
                    throw ConstructionError(
                        "SurfaceModel::from_json: stored Omega disagrees with reconstruction");
            }
    }
    return m;
}

double fay_residual(const SurfaceModel& model, const OddBracketConfig& bracket, const CVector& u,
                    const SurfacePoint& a, const SurfacePoint& b, const SurfacePoint& c,
                    const SurfacePoint& d) {
    const auto v = [&](const SurfacePoint& p, const SurfacePoint& q) {
        return model.abel_map(p, q);
    };
    const auto br = [&](const CVector& w) {
        const cplx val = bracket(w);
        if (val == cplx(0.0, 0.0)) return ScaledComplex::zero(); // exact coincidence
        const double peak =
            std::exp(kPi * w.imag().dot(bracket.omega.im_inverse() * w.imag()));
        if (std::abs(val) < 1e-9 * peak)
            throw ResampleSignal("fay_residual: bracket below scale threshold");
        return ScaledComplex(val);
    };

    const CVector vac = v(a, c), vbd = v(b, d), vbc = v(b, c), vad = v(a, d);
    const CVector vcb = v(c, b), vcd = v(c, d), vab = v(a, b);

    const ScaledComplex t1 = br(u + vac) * br(u + vbd) * br(vcb) * br(vad);
    const ScaledComplex t2 = br(u + vbc) * br(u + vad) * br(vac) * br(vbd);
    const ScaledComplex t3 = br(u) * br(u + vac + vbd) * br(vcd) * br(vab);

    const ScaledComplex defect = t1 + t2 - t3;
    const double scale = std::max({std::exp2(t1.log2_abs()), std::exp2(t2.log2_abs()),
                                   std::exp2(t3.log2_abs())});
    return std::exp2(defect.log2_abs()) / scale;
}

} // namespace tsum
