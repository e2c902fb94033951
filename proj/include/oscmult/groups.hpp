#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscmult/geometry.hpp"
#include "oscmult/kernels.hpp"

namespace oscmult {

// Unimodular 2x2 real matrix acting on the upper half-plane by Mobius
// transformation, or on upper half-space through the Poincare extension
// (which keeps the vertical-plane and vertical-axis formulas exact).
struct Isometry {
  double a = 1, b = 0, c = 0, d = 1;
  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
};

Isometry mul(const Isometry& l, const Isometry& r);
Isometry inverse(const Isometry& m);
ModelPoint apply_isometry(const Isometry& m, int model_dim, const ModelPoint& p);

enum class GroupKind { Cyclic, Schottky, FreeFuchsian };

// Free discrete isometry group given by its generators. Validation rejects
// elliptic generators (|trace| < 2), non-unimodular matrices, and Schottky
// data whose isometric circles overlap; word enumeration additionally raises
// an alarm when two short words send the basepoint to nearly the same place.
struct GroupModel {
  GroupKind kind = GroupKind::Cyclic;
  int model_dim = 2;
  std::vector<Isometry> generators;
  void validate() const;
};

struct OrbitEntry {
  std::string word;  // letters a,b,... with capitals for inverses; "e" = identity
  int length = 0;
  double distance = 0;
};

struct OrbitEnumeration {
  ModelPoint x, y;
  int max_word_length = 0;
  std::vector<OrbitEntry> entries;
  // Orbit-counting samples N(R) = #{entries with distance <= R}.
  std::vector<double> count_radii;
  std::vector<double> counts;
};

// All reduced words up to length L with their basepoint displacements.
OrbitEnumeration enumerate_orbit(const GroupModel& g, const ModelPoint& x,
                                 const ModelPoint& y, int L);

struct PoincarePartial {
  double sum = 0;
  double last_shell = 0;  // contribution of length-L words (convergence diagnostic)
};
PoincarePartial poincare_partial(const OrbitEnumeration& orbit, double s);

// Slope of log N(R) against R over the radii unaffected by the word-length
// truncation; the gap to a shell-growth estimator is reported as a diagnostic
// (the two agree for the groups in scope).
struct ExponentEstimate {
  double delta_hat = 0;
  double ci = 0;
  double spread = 0;
  bool truncation_warning = false;
  int radii_used = 0;
};
ExponentEstimate critical_exponent_estimate(const OrbitEnumeration& orbit);

enum class TriBool { False, True, Indeterminate };

// The convergence-type flag is recorded from the caller's assertion, never
// inferred numerically: deciding it needs measure-theoretic input no finite
// enumeration can supply.
struct GroupClassification {
  double delta_hat = 0;
  double ci = 0;
  double two_rho = 0;
  TriBool delta_lt_2rho = TriBool::Indeterminate;
  bool ct_flag = false;
  std::string divergence_note;
};
GroupClassification classify(const GroupModel& g, const OrbitEnumeration& orbit,
                             std::optional<bool> ct_assertion = std::nullopt);

// Sum of the damped wave kernel over the enumerated orbit, with the remainder
// bounded by the kernel's decay envelope times the fitted orbit growth. The
// bound is labelled conditional when it rests on an asserted convergence type
// rather than an exponent estimate safely below 2 rho.
struct QuotientKernel {
  cxd value{0, 0};
  double tail_bound = 0;
  bool conditional = false;
  int words = 0;
};
QuotientKernel quotient_wave_kernel(const GroupModel& g, const SpaceParams& sp,
                                    double sigma, const ModelPoint& x,
                                    const ModelPoint& y, int L,
                                    bool ct_asserted = false);

// int_0^1 sigma^{Re beta - 1 + (1-n)(1/2 - 1/p)} dsigma
//   + int_1^inf sigma^{Re beta - 1} e^{-k_p sigma} dsigma,
// the sigma-integral behind the subordinated operator-norm estimate. Finite
// exactly when Re beta > (n-1)(1/2 - 1/p); divergence is decided by the
// endpoint exponent before any quadrature runs.
struct NormIntegral {
  double value = 0;
  double power_part = 0;
  double exponential_part = 0;
  bool finite = false;
};
NormIntegral subordination_norm_integral(int n, double p, cxd beta, double k_p);

// Plain-text group description: lines "kind cyclic|schottky|free",
// "model_dim 2|3", and one "generator a b c d" per matrix (row-major).
GroupModel read_group_config(const std::string& path);
void write_orbit_csv(const std::string& path, const OrbitEnumeration& orbit);

}  // namespace oscmult
