#ifndef TSUM_RIEMANN_THETA_HPP
#define TSUM_RIEMANN_THETA_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "tsum/rational.hpp"
#include "tsum/theta_kernel.hpp"

namespace tsum {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using IMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Symmetric g x g matrix with positive definite imaginary part. Validation
// and the spectral data used by the lattice-sum truncation are computed once
// at construction; instances are immutable afterwards.
class PeriodMatrix {
public:
    explicit PeriodMatrix(CMatrix omega, double sym_tol = 1e-12);

    int g() const { return static_cast<int>(omega_.rows()); }
    const CMatrix& omega() const { return omega_; }
    const Eigen::MatrixXd& im() const { return im_; }
    const Eigen::MatrixXd& im_inverse() const { return im_inv_; }
    double im_min_eigenvalue() const { return im_min_eig_; }
    double symmetry_defect() const { return sym_defect_; }

private:
    CMatrix omega_;
    Eigen::MatrixXd im_;
    Eigen::MatrixXd im_inv_;
    double im_min_eig_ = 0.0;
    double sym_defect_ = 0.0;
};

// Rational characteristic vectors (alpha, beta). Half-characteristics have
// entries in {0, 1/2}; the theta-group action keeps everything in (1/2)Z.
struct Characteristic {
    std::vector<Rational> alpha;
    std::vector<Rational> beta;

    static Characteristic zero(int g);
    static Characteristic half_half(int g); // all entries 1/2

    int g() const { return static_cast<int>(alpha.size()); }
    // 4 sum_j alpha_j beta_j = 1 (mod 2)
    bool is_odd() const;
    Eigen::VectorXd alpha_d() const;
    Eigen::VectorXd beta_d() const;
};

struct TruncationBall {
    double radius;
    Eigen::VectorXd center; // in x = n + alpha coordinates
};

// Radius R such that lattice terms with ||n + alpha - center|| > R contribute
// less than tol relative to the dominant term, from the Gaussian bound with
// lambda_min(pi Im Omega), plus a fixed guard of 2 lattice units.
TruncationBall truncation_radius(const PeriodMatrix& omega, const CVector& u, double tol);

// Riemann theta with characteristics: sum over n in Z^g of
//   exp{ pi i (n+a)^T Omega (n+a) + 2 pi i (u+b)^T (n+a) }.
cplx theta_g(const CVector& u, const PeriodMatrix& omega, const Characteristic& chi,
             double tol = 1e-13);

// Theta with a fixed odd characteristic, the building block [u] of every
// bracket product. grad_norm records the nonsingularity probe at u = 0.
// Degenerate configurations are built from exact point coincidences, so an
// exactly-zero argument returns exactly 0 (odd theta vanishes at the origin).
struct OddBracketConfig {
    PeriodMatrix omega;
    Characteristic chi;
    double theta_tol = 1e-13;
    double grad_norm = 0.0;

    cplx operator()(const CVector& w) const {
        if (w.isZero(0.0)) return {0.0, 0.0};
        return theta_g(w, omega, chi, theta_tol);
    }
};

// Enumerates half-characteristics, keeps the odd ones, returns the first
// whose gradient at 0 passes the nonsingularity probe. g = 1 yields the
// theta_1 characteristic (1/2, 1/2).
OddBracketConfig pick_odd_char(const PeriodMatrix& omega, double theta_tol = 1e-13);

std::vector<Characteristic> odd_half_characteristics(int g);

enum class ShiftDirection { lattice, period };

// Quasi-periodicity defect along u -> u + e_k (lattice) or u -> u + Omega e_k
// (period), as |Theta(shifted)/(multiplier Theta(u)) - 1|.
double quasi_period_residual(const CVector& u, const PeriodMatrix& omega,
                             const Characteristic& chi, ShiftDirection dir, int k,
                             double tol = 1e-13);

// True iff gamma is integer symplectic and diag(a^T b), diag(c^T d) are even.
bool gamma12_validate(const IMatrix& gamma);

struct SpTriple {
    PeriodMatrix omega;
    CVector u;
    Characteristic chi;
};

// Theta-group action: Omega' = (a Omega + b)(c Omega + d)^{-1},
// u' = (c Omega + d)^{-T} u, characteristics moved by the integer rule with
// the half-diagonal shift. Characteristic arithmetic is exact.
SpTriple sp_act(const IMatrix& gamma, const PeriodMatrix& omega, const CVector& u,
                const Characteristic& chi);

// rho = Theta'(u';Omega') / [sqrt(det(c Omega + d)) e^{pi i u^T (c Omega+d)^{-1} c u}
//       Theta(u;Omega)]. Contract: |rho| = 1 and rho^8 = 1; the particular
// eighth root depends on the square-root branch and is not pinned.
cplx sp_mod_ratio(const IMatrix& gamma, const PeriodMatrix& omega, const CVector& u,
                  const Characteristic& chi, double tol = 1e-13);

} // namespace tsum

#endif
