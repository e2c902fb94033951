#pragma once

#include <string>
#include <vector>

#include "oscmult/kernels.hpp"

namespace oscmult {

// One concentric shell of the convolution-operator bound: the kernel's far
// part integrated over t in [j, j+1] against the spherical weight
// phi_{-i eta rho}^{s(p)} and the radial density J.
struct ShellBound {
  int j = 0;
  double value = 0.0;
  double quadrature_error = 0.0;
};

// I_j = int_j^{j+1} |kappa_inf(t)| phi_{-i eta_ratio rho}(t)^{s(p)} J(t) dt,
// with kappa_inf interpolated from its grid (which must cover [j, j+1]).
ShellBound shell_integral(const SpaceParams& sp, const RadialGrid& kappa_inf,
                          double p, double eta_ratio, int j);

// Least-squares decay models for a shell sequence: a power law (log I against
// log j) and an exponential (log I against j). `usable` counts shells whose
// value clears the quadrature-error floor; fewer than 10 usable shells is an
// error (insufficient dynamic range), not a silent fit.
struct ShellDecayFit {
  LineFit power;
  LineFit exponential;
  int usable = 0;
  bool super_polynomial = false;  // the exponential model fits better
  bool meets_order = false;       // power slope <= -required, or faster
};

ShellDecayFit shell_decay_fit(const std::vector<ShellBound>& shells,
                              double required_order);

// Sum of shells up to j_max plus a tail extrapolated from the better-fitting
// envelope; converged means the tail is provably below 1% of the partial sum.
struct KSTotal {
  double I_total = 0.0;
  double tail_bound = 0.0;
  bool converged = false;
  std::vector<ShellBound> shells;
};

KSTotal ks_total(const SpaceParams& sp, const RadialGrid& kappa_inf, double p,
                 double eta_ratio, int j_max);

// Group-side hypotheses the far-field theorem needs when alpha = 1: either
// the quotient's exponent stays below the critical 2 rho, or the group lies
// in the convergence-type class.
struct GroupFlags {
  bool delta_lt_2rho = true;
  bool ct = false;
};

enum class Verdict { BoundedCertified, L2Only, NotCovered };
std::string verdict_name(Verdict v);

// Decision record for L^p boundedness of the oscillating-multiplier operator:
// the local threshold on Re beta (alpha n |1/p - 1/2| for alpha < 1,
// (n-1)|1/p - 1/2| at alpha = 1), and for alpha < 1 the numerically assembled
// far-field bound. Below threshold the verdict is NotCovered — never a claim
// of unboundedness: these are sufficient conditions only.
struct BoundCertificate {
  std::string space;
  double p = 2.0;
  double alpha = 1.0;
  cxd beta{0.0, 0.0};
  double eta_ratio = 1.0;
  double local_threshold = 0.0;
  bool local_satisfied = false;
  double far_total = 0.0;
  double far_tail = 0.0;
  int far_shells = 0;
  bool far_converged = false;
  bool far_checked = false;   // far integral only assembled on the alpha<1 path
  bool strip_boundary = false;  // v_gamma(p, eta_ratio) sits at the strip edge
  int b_prime = 0;              // smallest integer >= (n-1)/2, reported
  Verdict verdict = Verdict::NotCovered;
};

BoundCertificate certify(const SpaceParams& sp, const MultiplierSpec& spec, double p,
                         double eta_ratio, GroupFlags flags = {});

std::string certificate_json(const BoundCertificate& cert);
void write_certificate_json(const std::string& path, const BoundCertificate& cert);
void write_shell_csv(const std::string& path, const std::vector<ShellBound>& shells);

}  // namespace oscmult
