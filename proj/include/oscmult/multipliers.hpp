#pragma once

#include <functional>
#include <vector>

#include "oscmult/geometry.hpp"
#include "oscmult/special.hpp"

namespace oscmult {

// Symbol (lambda^2 + rho^2)^{-beta/2} e^{i (lambda^2 + rho^2)^{alpha/2}},
// principal branches; analytic on the open strip |Im lambda| < rho with
// branch points at lambda = ±i rho.
struct MultiplierSpec {
  double alpha = 1.0;
  cxd beta{0.0, 0.0};
  double rho = 1.0;
  void validate() const;
};

cxd eval_m(const MultiplierSpec& spec, cxd lambda);

struct DerivativeResult {
  cxd value;
  double error = 0.0;  // two-radius contour disagreement
};

// k-th derivative by trapezoid quadrature of the Cauchy integral on a circle
// of radius r around lambda (spectrally accurate for analytic symbols);
// evaluated at r and r/2, the gap is the reported error. The circle must stay
// inside the strip: r < rho - |Im lambda|. Conditioning note: the extraction
// is scaled by the largest |m| on the circle, and symbols with super-linear
// phase growth (alpha > 1) explode off the real axis like e^{alpha |Re| r} --
// at large |Re lambda| pick r ~ 1/|lambda| and watch the reported error.
DerivativeResult derivative(const MultiplierSpec& spec, int k, cxd lambda, double r);
DerivativeResult derivative(const std::function<cxd(cxd)>& symbol, double rho, int k,
                            cxd lambda, double r);

// Strip-class parameters: analytic on |Im lambda| <= v rho, with
// sup <lambda>^{k theta} |d^k m| finite for k = 0..N.
struct StripClassParams {
  double v = 0.9;
  int N = 4;
  double theta = 0.5;
  void validate() const;
};

struct ClassReport {
  bool pass = false;
  bool finite = false;
  bool stable = false;
  // Per k = 0..N: weighted sups on the base grid and on the refined
  // (doubled density, doubled lambda range) grid.
  std::vector<double> worst_constant;
  std::vector<double> refined_constant;
};

// Samples |d^k m(lambda)| <lambda>^{k theta} over a grid of the closed strip
// |Im| <= v rho, |Re| <= lambda_max; pass iff every sup is finite and moving
// to the refined grid (denser nodes AND doubled range) changes it by at most
// the relative tolerance -- divergent symbols keep growing with the range and
// fail the stability leg. The Cauchy circles reach into |Im| < rho, so the
// sampled symbol must be evaluable on the open rho-strip, not just the band.
ClassReport class_membership(const MultiplierSpec& spec, const StripClassParams& params,
                             double lambda_max, double tol);
ClassReport class_membership(const std::function<cxd(cxd)>& symbol, double rho,
                             const StripClassParams& params, double lambda_max, double tol);

// s(p) = 2 min(1/p, 1/p'), defined for p in (1, inf).
double s_p(double p);

// v(p) = s(p) * eta_ratio + |2/p - 1|, eta_ratio = |eta|/rho in [0, 1].
double v_gamma(double p, double eta_ratio);

// N(n, theta) = floor((n+1)/(2 theta)) + 1.
int smoothness_order(int n, double theta);

}  // namespace oscmult
