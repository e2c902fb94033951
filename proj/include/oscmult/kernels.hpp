#pragma once

#include <string>
#include <vector>

#include "oscmult/multipliers.hpp"
#include "oscmult/transform.hpp"

namespace oscmult {

// Damped wave kernel: inverse transform of e^{(i - sigma)(lambda^2 + rho^2)^{alpha/2}}.
struct WaveKernelSpec {
  SpaceParams sp;
  double sigma = 1.0;
  double alpha = 1.0;
  void validate() const;  // sigma > 0, alpha > 0
};

// The spectral symbol of the damped wave; sup over real lambda of |.| is
// e^{-sigma rho^alpha}, attained at lambda = 0.
cxd wave_symbol(const WaveKernelSpec& spec, cxd lambda);

InverseResult wave_kernel(const WaveKernelSpec& spec, const std::vector<double>& ts,
                          const QuadratureOptions& opts = {});

// Oscillating-multiplier kernel: inverse transform of the symbol in `spec`,
// with the Gaussian regularizer eps > 0 supplying absolute convergence when
// the symbol decays slower than the Plancherel density grows.
InverseResult oscillating_kernel(const SpaceParams& sp, const MultiplierSpec& spec,
                                 const std::vector<double>& ts, double eps,
                                 const QuadratureOptions& opts = {});

// Local/far partition kappa = kappa0 + kappa_inf: kappa0 supported in [0, 2],
// kappa_inf in [1, inf), glued by a polynomial smoothstep on [1, 2] whose
// first `cutoff_order` derivatives vanish at both junctions. The pieces sum
// back to the input exactly on every node.
struct KernelSplit {
  RadialGrid kappa0;
  RadialGrid kappa_inf;
  int cutoff_order = 7;
};

KernelSplit split_kernel(const RadialGrid& kappa, int cutoff_order = 7);

// The C^order transition polynomial itself (1 at x<=0 down to 0 at x>=1),
// exposed for tests of the junction smoothness.
double smoothstep_down(int order, double x);

// Decay scan of |q_sigma(t)| (t+1)^{3/2} e^{2 rho t} over a radial range
// (alpha = 1 wave kernels): the normalized quantity should stay bounded with
// a running sup that stabilizes as t grows. `stable` fails when the last
// window still moves the sup; `usable_t_max` marks where quadrature error
// overtakes the exponentially small kernel values.
struct DecayReport {
  std::vector<double> t;
  std::vector<double> normalized;  // |q| (t+1)^{3/2} e^{2 rho t}
  double sup = 0.0;
  bool stable = false;
  double usable_t_max = 0.0;
};

DecayReport decay_check_q1(const SpaceParams& sp, double sigma, double t_lo, double t_hi,
                           int points = 48);

// L1(X) norm of the damped wave kernel: radial integral of |q_sigma| J over
// [0, t_max] plus a tail certified by the fitted decay envelope (constant
// doubled as a safety factor). Throws when the envelope cannot be fitted
// because quadrature noise dominates the tail window.
double l1_norm(const SpaceParams& sp, double sigma, double alpha = 1.0);

// Slope of log ||q_sigma||_1 against log sigma over a small-sigma grid
// (all entries in (0, 1/2], at least 6 of them).
LineFit l1_scaling_fit(const SpaceParams& sp, const std::vector<double>& sigmas);

// Subordination assembly of the oscillating kernel from damped wave kernels:
//   kappa_{alpha,beta}(t) = (1/Gamma(beta/alpha)) int_0^inf sigma^{beta/alpha - 1}
//                           q_{sigma,alpha}(t) dsigma,
// computed by log-substitution quadrature split at sigma = 1, every q sampled
// with the same spectral truncation and regularizer eps so the identity holds
// per regularized symbol.
cxd subordination_assemble(const SpaceParams& sp, double alpha, cxd beta, double t,
                           double eps, int panels_per_unit = 2);

// Kernel table as CSV: t, re, im, abs, envelope_ratio, where envelope_ratio
// is |kappa(t)| (t+1)^{3/2} e^{2 rho t}.
void write_kernel_table(const std::string& path, const SpaceParams& sp,
                        const InverseResult& res);

}  // namespace oscmult
