#ifndef TSUM_SURFACE_HPP
#define TSUM_SURFACE_HPP

#include <array>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "tsum/riemann_theta.hpp"

namespace tsum {

// A point on a model surface. Torus: w is the coordinate on C/(Z + tau Z),
// sheet unused. Hyperelliptic: w.real() is the x-coordinate (w.imag() = 0)
// and sheet in {+1,-1} selects the sign of y.
struct SurfacePoint {
    cplx w{0.0, 0.0};
    int sheet = +1;

    static SurfacePoint torus(cplx w) { return {w, +1}; }
    static SurfacePoint hyperelliptic(double x, int sheet) { return {cplx(x, 0.0), sheet}; }
};

// Low-level building block, exposed for tests: int_{e_j}^{e_{j+1}} x^{m-1}/y
// on the branch continued just above the real axis (sheet_sign = +1), via
// Gauss-Chebyshev with `nodes` points. j is 1-based, m in {1, 2}.
cplx hyperelliptic_segment_integral(const std::array<double, 6>& e, int j, int m, int nodes,
                                    int sheet_sign = +1);

// A concrete Riemann surface: the genus-1 torus or a genus-2 real
// hyperelliptic curve y^2 = prod (x - e_i). Construction computes the period
// matrix and certifies it; all queries afterwards are const and thread-safe.
class SurfaceModel {
public:
    enum class Kind { torus, hyperelliptic2 };

    static SurfaceModel make_torus(cplx tau);
    // Six distinct sorted reals; quadrature starts at `nodes` per segment and
    // doubles until every period moves by < 1e-9.
    static SurfaceModel make_hyperelliptic2(const std::array<double, 6>& e, int nodes = 64);

    Kind kind() const { return kind_; }
    int genus() const { return kind_ == Kind::torus ? 1 : 2; }
    const PeriodMatrix& omega() const { return *omega_; }
    cplx tau() const { return tau_; }
    const std::array<double, 6>& branch_points() const { return e_; }

    // v(a,b) = integral of the normalized differentials from a to b. Torus:
    // b - a. Hyperelliptic: difference of per-point potentials integrated
    // from the base point e_1 along the real axis with sheet tracking, so
    // path additivity v(a,c) + v(b,d) = v(b,c) + v(a,d) holds exactly.
    CVector abel_map(const SurfacePoint& a, const SurfacePoint& b) const;

    void validate_point(const SurfacePoint& p) const;

    // certificates
    double symmetry_defect() const { return symmetry_defect_; }
    double im_min_eigenvalue() const { return omega_->im_min_eigenvalue(); }
    double a_period_defect() const { return a_period_defect_; }
    double quadrature_shift() const { return quadrature_shift_; }
    int nodes_used() const { return nodes_used_; }

    nlohmann::json to_json() const;
    static SurfaceModel from_json(const nlohmann::json& j);

private:
    SurfaceModel() = default;

    CVector potential(double x, int sheet) const;

    Kind kind_ = Kind::torus;
    cplx tau_{0.0, 1.0};
    std::array<double, 6> e_{};
    std::optional<PeriodMatrix> omega_;
    Eigen::Matrix2cd normalization_; // rows: normalized differentials in (dx/y, x dx/y)
    double symmetry_defect_ = 0.0;
    double a_period_defect_ = 0.0;
    double quadrature_shift_ = 0.0;
    int nodes_used_ = 0;
};

// Scaled defect of the three-term Fay identity at u and four surface points,
// |T1 + T2 - T3| / max |T_i|, with the odd bracket fixed by `bracket`.
double fay_residual(const SurfaceModel& model, const OddBracketConfig& bracket, const CVector& u,
                    const SurfacePoint& a, const SurfacePoint& b, const SurfacePoint& c,
                    const SurfacePoint& d);

} // namespace tsum

#endif
