#ifndef TSUM_EHS_HPP
#define TSUM_EHS_HPP

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "tsum/theta_kernel.hpp"

namespace tsum {

// Parameters of an (r+1)E_r series: term ratio
//   h(n) = z prod_i theta(t_i q^n; p) / prod_i theta(w_i q^n; p),
// with w_0 = q by the unilateral normalization.
struct EllipticSeriesSpec {
    std::vector<cplx> t; // t_0 .. t_r
    std::vector<cplx> w; // w_0 .. w_r, w_0 = q
    cplx z{1.0, 0.0};
    ModularPair bases;

    int r() const { return static_cast<int>(t.size()) - 1; }
};

struct SeriesFlags {
    bool balanced = false;
    bool well_poised = false;
    bool very_well_poised = false;
    bool totally_elliptic_candidate = false;
};

// Very-well-poised data: t_0, the free parameters t_1..t_{r-4}, argument z.
// The four constrained parameters t_{r-3}..t_r of the very-well-poised
// pattern are implicit and never stored.
struct VWPSpec {
    cplx t0;
    std::vector<cplx> free_params; // t_1 .. t_{r-4}
    cplx z{1.0, 0.0};
    ModularPair bases;

    int r() const { return static_cast<int>(free_params.size()) + 4; }
};

struct TerminationInfo {
    bool terminating = false;
    int index = -1; // which t_m
    int length = 0; // N with t_m = q^{-N}
};

VWPSpec make_vwp(cplx t0, std::vector<cplx> free_params, cplx z, const ModularPair& bases);

// Full parameter lists of the very-well-poised series (the four constrained
// parameters realized with principal square roots).
EllipticSeriesSpec expand_vwp(const VWPSpec& spec);

// Term ratio h(n) = c_{n+1}/c_n at complex n. Throws PoleError when a
// denominator theta vanishes.
cplx h_ratio(const EllipticSeriesSpec& spec, cplx n);

SeriesFlags classify(const EllipticSeriesSpec& spec);

TerminationInfo detect_termination(const EllipticSeriesSpec& spec, int max_length = 256);

// Sum of c_n, c_0 = 1, c_{n+1} = c_n h(n). The TerminationInfo overload sums
// exactly length+1 terms; the max_terms overload requires the empirical
// ratio to stay below 0.9 and throws DivergenceError otherwise.
cplx series_eval(const EllipticSeriesSpec& spec, const TerminationInfo& term);
cplx series_eval(const EllipticSeriesSpec& spec, int max_terms);

// Very-well-poised form: sum_n theta(t0 q^{2n};p)/theta(t0;p)
//   prod_{m=0}^{r-4} theta(t_m;p;q)_n / theta(q t0/t_m;p;q)_n (-qz)^n.
cplx series_eval(const VWPSpec& spec, int n_terms);

// Terminating very-well-poised 10E9 sum at z = -1: lhs is the k-sum, rhs the
// closed product. t4 = q^{-n} and t5 = q t0^2/(t1 t2 t3 t4) are built
// internally.
std::pair<cplx, cplx> frenkel_turaev_pair(cplx t0, cplx t1, cplx t2, cplx t3, int n,
                                          const ModularPair& bases, double tol = kDefaultTol);

enum class E87Form { multiplicative, additive };

// Indeterminate 8E7 sum with t3 = t0/(t1 t2). The additive form evaluates
// the same identity through theta_1 series with u_i = Log t_i / (2 pi i
// sigma); both routes agree analytically and are compared numerically.
std::pair<cplx, cplx> sum_8e7_pair(cplx t0, cplx t1, cplx t2, int n, const ModularPair& bases,
                                   E87Form form = E87Form::multiplicative,
                                   double tol = kDefaultTol);

// Term ratio of the very-well-poised series at integer n.
cplx h_vwp(const VWPSpec& spec, cplx n, double tol = kDefaultTol);

// Balancing test for odd r = 2m+1: prod free t_j = q^{m-3} t0^{m-2}.
bool vwp_balanced(const VWPSpec& spec, double rel_tol = 1e-12);

// Rebalances the last free parameter from the others (the "companion").
VWPSpec rebalance_companion(const VWPSpec& spec);

// max over sampled integer n of |h(n; t0 -> p t0)/h(n) - 1| with the
// companion recomputed; requires a balanced odd-r spec.
double total_ellipticity_residual(const VWPSpec& spec, int n_samples = 6);

// max over sampled integer n of |h(n + tau/sigma)/h(n) - 1| for the same
// balanced class (double-period shift of the summation variable).
double vwp_double_period_residual(const VWPSpec& spec, int n_samples = 6);

} // namespace tsum

#endif
