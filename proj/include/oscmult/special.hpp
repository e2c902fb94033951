#pragma once

#include <complex>
#include <vector>

#include "oscmult/geometry.hpp"

namespace oscmult {

using cxd = std::complex<double>;

// log Gamma(z), principal branch, continuous on the right half-plane.
// Throws std::domain_error at the poles (nonpositive integers).
cxd log_gamma(cxd z);

// Gauss hypergeometric 2F1(a, b; c; x) for real x <= 0 and complex
// parameters. Power series for |x| < 1/2, the (1-x)^{-a} argument
// transformation for x <= -1/2. c at a nonpositive integer is rejected.
cxd gauss_2f1(cxd a, cxd b, cxd c, double x);

// --- spherical functions ---------------------------------------------------
//
// phi_lambda(t) = 2F1((rho - i lambda)/2, (rho + i lambda)/2; jacobi_a + 1;
//                     -sinh^2 t),  phi_lambda(0) = 1.
//
// Away from t = 0 the two-sided asymptotic series
//   phi = c(lambda) E(lambda, t) + c(-lambda) E(-lambda, t),
//   E(lambda, t) = e^{(i lambda - rho) t} sum_k a_k(lambda) e^{-2kt}
// is used; a_k follows from the radial differential equation and c is the
// density factor below. Supported spectral parameters: the closed strip
// |Im lambda| <= rho.
cxd spherical_phi(const SpaceParams& sp, cxd lambda, double t);

// c(lambda) = 2^{rho - i lambda} Gamma(a+1) Gamma(i lambda)
//             / [Gamma((rho + i lambda)/2) Gamma((i lambda + a - b + 1)/2)],
// a = jacobi_a, b = jacobi_b. Pole at lambda = 0.
cxd c_function(const SpaceParams& sp, cxd lambda);

// 1/|c(lambda)|^2 for real lambda, computed from a factorization that is
// finite at lambda = 0 (value 0) and exactly even.
double plancherel_density(const SpaceParams& sp, double lambda);

// --- precomputed series form ----------------------------------------------
// The transform quadratures evaluate phi for one lambda across many t; the
// lambda-only work (c-factors and recursion coefficients) is done once here.

struct PhiSeries {
  cxd lambda;
  double rho = 0;
  bool shortcut_one = false;       // phi === 1 (lambda = ±i rho)
  bool use_series_pair = true;     // false: fall back to direct evaluation
  cxd cp, cm;                      // c(lambda), c(-lambda)
  std::vector<cxd> ap, am;         // a_k(lambda), a_k(-lambda)
};

// One branch E(lambda, t); enough for integrands rewritten against a single
// exponential behaviour (used by the shifted-contour inverse transform).
struct BranchSeries {
  cxd lambda;
  double rho = 0;
  std::vector<cxd> a;
};

// t_min: smallest radius the series will be evaluated at (sets the term
// count). Requires the expansion to be resonance-free for this lambda, which
// holds off the imaginary axis and is checked on it.
PhiSeries phi_series_prepare(const SpaceParams& sp, cxd lambda, double t_min);
cxd phi_series_eval(const PhiSeries& s, double t);

BranchSeries branch_series_prepare(const SpaceParams& sp, cxd lambda, double t_min);
cxd branch_series_eval(const BranchSeries& s, double t);

namespace detail {
// Coefficients a_k(lambda) of E; throws NumericsError when the recursion
// denominator k(k - i lambda) degenerates (resonant lambda on i Z).
std::vector<cxd> hc_coefficients(const SpaceParams& sp, cxd lambda, double t_min);
cxd phi_hypergeometric(const SpaceParams& sp, cxd lambda, double t);
}  // namespace detail

}  // namespace oscmult
