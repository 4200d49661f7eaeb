#ifndef TSUM_SUMMATION_HPP
#define TSUM_SUMMATION_HPP

#include <memory>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tsum/surface.hpp"

namespace tsum {

// Data of the multiparameter sum: n+1 variables z_k in C^g and 4(n+1)
// surface points, with the odd bracket fixed from the model's Jacobian.
struct SummandConfig {
    int n = 0;
    std::vector<CVector> z;                    // n+1
    std::vector<SurfacePoint> a, b, c, d;      // n+1 each
    std::shared_ptr<const SurfaceModel> model;
    std::shared_ptr<const OddBracketConfig> bracket;

    void validate(bool allow_coincidence = false) const;

    nlohmann::json to_json() const;
    static SummandConfig from_json(const nlohmann::json& j,
                                   std::shared_ptr<const SurfaceModel> model = nullptr);
};

// The three four-fold bracket products of the proof:
//   g_k = [z_k, z_k+v(a,c)+v(b,d), v(c,d), v(a,b)]
//   h_k = [z_k+v(a,c), z_k+v(b,d), v(c,b), v(a,d)]
//   lead_k = [z_k+v(b,c), z_k+v(a,d), v(a,c), v(b,d)]   (= g_k - h_k by Fay)
ScaledComplex g_term(const SummandConfig& cfg, int k);
ScaledComplex h_term(const SummandConfig& cfg, int k);
ScaledComplex lead_term(const SummandConfig& cfg, int k);

struct SumPair {
    cplx lhs;
    cplx rhs;
    double scaled_residual; // |lhs-rhs| / max(|lhs|, |rhs|, max term magnitude)
};

// lhs = sum_k lead_k prod_{j<k} g_j prod_{j>k} h_j; rhs = prod g_k - prod h_k.
SumPair theorem_sum_pair(const SummandConfig& cfg);

// Pointwise induction step: max_k of the scaled defect of lead_k + h_k = g_k.
double induction_step_residual(const SummandConfig& cfg);

struct TelescopeSeq {
    std::vector<cplx> x;
    std::vector<cplx> y;
};

// sum_k (x_k - y_k) prod_{j<k} x_j prod_{j>k} y_j  vs  prod x - prod y.
std::pair<cplx, cplx> telescope_pair(const TelescopeSeq& seq);

enum class DegenerateMode { sum2, sum3 };

// sum2: forces a_N = b_N (so g_N = 0) and checks the ratio-form sum equals 1.
// sum3: forces c_0 = b_0 (so h_0 = 0) and checks the sum equals the closed
// product of g_k/h_k. Returns the scaled defect.
double degenerate_sum_check(SummandConfig cfg, DegenerateMode mode);

// Degenerate ratio-form value (the quantity that equals 1) for an already
// a_N = b_N configuration; exposed for the lattice-shift invariance checks.
cplx sum2_value(const SummandConfig& cfg);

// Corollary of the hypergeometric-type form: points x_0..x_n, a_0..a_n, d_0
// with z_k = u_0 + v(x_0,x_k). Returns the scaled lhs-rhs defect.
double corollary1_check(const SurfaceModel& model, const OddBracketConfig& bracket,
                        const CVector& u0, const std::vector<SurfacePoint>& xs,
                        const std::vector<SurfacePoint>& as, const SurfacePoint& d0);

// Exact structural checks on the closed-form side: numerator and denominator
// argument sums agree, and reciprocal pairs sum to u0 + 2 v(x_k). Returns the
// max defect (exact arithmetic identities, so ~1e-16).
double corollary1_structural_defect(const SurfaceModel& model, const CVector& u0,
                                    const std::vector<SurfacePoint>& xs,
                                    const std::vector<SurfacePoint>& as, const SurfacePoint& d0);

// Three-way telescoping corollary: sum over k of cross-ratio terms equals the
// boundary difference and its closed Fay form. Returns the max pairwise
// scaled defect among the three expressions.
double corollary2_check(const SurfaceModel& model, const OddBracketConfig& bracket,
                        const CVector& z0, const SurfacePoint& a, const SurfacePoint& c,
                        const std::vector<SurfacePoint>& xs);

} // namespace tsum

#endif
