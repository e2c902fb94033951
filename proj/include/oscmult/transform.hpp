#pragma once

#include <functional>
#include <vector>

#include "oscmult/geometry.hpp"
#include "oscmult/grids.hpp"
#include "oscmult/special.hpp"

namespace oscmult {

// Controls for the spectral-side quadrature of the inverse transform.
//
// The integral is regularized with exp(-eps lambda^2) and (by default)
// extrapolated to eps = 0 with one Richardson step, so `epsilon` trades
// smoothing bias against tail truncation at lambda_max. Nodes far enough out
// switch to a contour shifted to Im lambda = contour_width, which removes the
// e^{rho t} cancellation between the two asymptotic branches of phi; that
// path requires the symbol to be evaluable (analytic) in the shifted strip,
// so pass contour_shift = 0 for symbols only defined on the real axis.
struct QuadratureOptions {
  double lambda_max = 0.0;      // 0: use 60
  double epsilon = 0.0;         // 0: ln(1e8)/lambda_max^2
  bool richardson = true;       // second evaluation at eps/2, extrapolate
  double contour_shift = -1.0;  // <0: auto (0.9 rho); 0: axis only; else width < rho
  double far_field_start = 1.2; // nodes with t >= this use the shifted contour
  int min_panels = 8;
};

struct InverseResult {
  RadialGrid grid;
  // The two regularizer levels behind the extrapolated value, and a per-node
  // error estimate (twice the extrapolation step |k_half - k_full|, the
  // leading term the Richardson step cancels).
  std::vector<cxd> value_eps, value_eps_half;
  std::vector<double> error_estimate;
  double calibration = 0.0;
  double epsilon_used = 0.0;
  double lambda_max_used = 0.0;
  double contour_width = 0.0;  // 0 when every node stayed on the axis
  int axis_panels = 0;
  int far_panels = 0;
};

// Normalization constant C_X of the inversion formula
//   f(t) = C_X int_0^inf fhat(lambda) phi_lambda(t) |c(lambda)|^{-2} dlambda,
// fixed numerically (once per space, cached) by a round trip on a narrow
// Gaussian bump. With this library's density J = (2 sinh t)^{m1} (2 sinh 2t)^{m2}
// and |c|^{-2} normalization, the three-dimensional real hyperbolic space gives
// 1/(2 pi).
double calibration_constant(const SpaceParams& sp);

// fhat(lambda_i) = int_0^{t_max} f(t) phi_lambda(t) J(t) dt with the radial
// density J; panel decomposition fixed by lambda_max * t_max.
SpectralGrid forward_transform(const SpaceParams& sp, const std::function<cxd(double)>& f,
                               double t_max, const std::vector<double>& lambdas,
                               int min_panels = 8);
// Same with samples: f is cubic-splined over its nodes, t_max = last node.
SpectralGrid forward_transform(const SpaceParams& sp, const RadialGrid& f,
                               const std::vector<double>& lambdas);

// kappa(t_i) = C_X int_0^inf m(lambda) e^{-eps lambda^2} phi_lambda(t)
//              |c(lambda)|^{-2} dlambda, Richardson-extrapolated in eps.
//
// Far nodes are evaluated instead along Im lambda = w through the one-branch
// representation  kappa(t) = C_X int_R m(z) e^{-eps z^2} E(z, t) / c(-z) dz,
// z = lambda + i w, which is exact for 0 < w < rho: the integrand's poles
// (the c-quotient's and the series coefficients') all sit in the closed lower
// half-plane, and the regularized integrand vanishes at Re z = ±inf.
//
// The panel decomposition is fixed per run from lambda_max, the worst radius
// in the node set, and the sampled total phase variation of m; every node is
// then integrated on that same decomposition (results do not depend on
// thread count).
InverseResult inverse_transform(const SpaceParams& sp, const std::function<cxd(cxd)>& m,
                                const std::vector<double>& t_nodes,
                                const QuadratureOptions& opts = {});

}  // namespace oscmult
