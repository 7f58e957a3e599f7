#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "aztec/model.hpp"

namespace aztec {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

// Transition matrices of the transfer-matrix factorization.
//   phi_{2i-1}(z) = [[1, 1/(alpha_i z)], [alpha_i, 1]]
//   phi_{2i}(z)   = [[1, 1/(beta_i z)], [beta_i, 1]] / (1 - 1/z)
// m is 1-based in 1..2*ell (periodic beyond). Throws Error("PoleAtZ...").
Mat2 phi(const WeightConfig& cfg, int m, cd z);

// Phi(z) = prod_{m=1}^{2 ell} phi_m(z); det Phi = 1.
Mat2 big_phi(const WeightConfig& cfg, cd z);

// Partial products A_i(z) = prod_{m=1}^{2i} phi_m(z), i in [0, ell].
// det A_i = 1, so the inverse is the adjugate.
Mat2 phi_prefix(const WeightConfig& cfg, int i, cd z);
Mat2 adjugate(const Mat2& m);

// Everything attached to the spectral curve that reduces to finite algebra.
struct SpectralData {
    WeightConfig cfg;
    std::vector<double> q_coeffs;  // ascending, degree ell: q = (z-1)^ell Tr Phi
    std::vector<double> p_coeffs;  // ascending, degree 2*ell-1: p = q^2 - 4 (z-1)^{2 ell}
    std::vector<double> roots;     // of p, sorted descending: 0 = z_0 > z_1 >= ...
    double tau = 0;                // turning-point height constant, in (0, ell)
    double sigma2 = 0;             // G''(1), the variance constant used everywhere
    double sigma2_series = 0;      // the literal closed-form sum (reporting only; see notes)
    double B = 0;                  // q(1) = prod (1 + beta_m/alpha_m)(1 + alpha_{m+1}/beta_m)
    bool genus_maximal = true;

    double sigma() const;
    double q_at(double z) const;
    double p_at(double z) const;
    cd p_at(cd z) const;
    // |z_1| when it exists (ell >= 2); for ell = 1 the cut is (-inf, 0].
    bool has_z1() const { return roots.size() > 1; }
    double abs_z1() const { return std::abs(roots[1]); }
};

// Polynomial part: q by evaluation-interpolation, p by coefficient algebra,
// roots by companion matrix + Newton polish. Throws Error("RootFindingFailed...").
SpectralData q_and_p(const WeightConfig& cfg);

// Full construction: polynomials, roots, tau, sigma2 with internal cross-checks.
// tau is checked three ways (closed sum, q'(1)/q(1), p'(1)/(2 p(1))) to 1e-10
// relative; failure throws Error("CrossCheckFailed...").
SpectralData make_spectral_data(const WeightConfig& cfg);

// Closed-form sums over the fundamental domain (a_k = alpha_k/beta_{k-1},
// b_k = beta_k/alpha_k). tau_closed_form is exact for all ell. The sigma2
// series reproduces the paper's printed sum; the true curvature G''(1) is
// sigma2_curvature (they differ; see the README numerics notes).
double tau_closed_form(const WeightConfig& cfg);
double sigma2_series_form(const WeightConfig& cfg);
double sigma2_curvature(const WeightConfig& cfg);

// theta(t) in (0,1) and nu(t, j); ell-periodic in t, t >= 1.
double theta_fn(const WeightConfig& cfg, long t);
double nu_fn(const WeightConfig& cfg, long t, int j);

// log g(ell*x + i, 2y + j) for the gauge function g (position-only; y enters
// the formula trivially). N is the diamond parameter; sigma from SpectralData.
double log_gauge(const SpectralData& sd, long x, int i, long y, int j, long N);

// Q(z, w) = adj(w I - Phi(z)) / (2 w - Tr Phi(z)).
// Requires (z, w) on the curve; throws Error("NotOnCurve...") or
// Error("BranchPointDivision...").
Mat2 q_matrix(const WeightConfig& cfg, cd z, cd w);

// Helpers shared with the surface/kernel modules.
cd poly_eval(const std::vector<double>& coeffs, cd z);
std::vector<double> poly_derivative(const std::vector<double>& coeffs);

}  // namespace aztec
