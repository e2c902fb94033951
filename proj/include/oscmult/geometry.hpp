#pragma once

#include <array>
#include <string>

namespace oscmult {

// Rank-one families, labelled by the base field of the hyperbolic space.
enum class Family { RealHyp, ComplexHyp, QuatHyp, OctPlane };

Family family_from_string(const std::string& s);
std::string family_name(Family f);

// Root multiplicities (m1, m2) and the derived spectral parameters.
//   n  = m1 + m2 + 1          real dimension
//   rho = (m1 + 2 m2) / 2     half sum of roots
//   jacobi_a = (m1 + m2 - 1)/2, jacobi_b = (m2 - 1)/2
struct SpaceParams {
  Family family;
  int k;   // H^k over the field; 0 for OctPlane
  int n;
  int m1;
  int m2;
  double rho;
  double jacobi_a;
  double jacobi_b;
};

// RealHyp: k is the real dimension n >= 2 -> (n-1, 0).
// ComplexHyp(k>=2): (2k-2, 1); QuatHyp(k>=2): (4k-4, 3); OctPlane: (8, 7).
SpaceParams make_space(Family f, int k = 0);

// Radial volume density J(t) = (2 sinh t)^m1 (2 sinh 2t)^m2, t >= 0.
double cartan_density(const SpaceParams& sp, double t);
double log_cartan_density(const SpaceParams& sp, double t);

// Point of the upper half-space model of H^2 or H^3; the last stored
// coordinate is the height and must be positive.
struct ModelPoint {
  int dim = 2;                     // 2 or 3
  std::array<double, 3> c{0, 0, 0};  // dim==2: (x, height); dim==3: (x1, x2, height)

  static ModelPoint plane(double x, double height);
  static ModelPoint space(double x1, double x2, double height);
  double height() const { return dim == 2 ? c[1] : c[2]; }
};

// Geodesic distance, cosh d = 1 + |x - y|^2 / (2 h_x h_y) with the full
// Euclidean difference (height included) in the numerator.
double hyperbolic_distance(const ModelPoint& x, const ModelPoint& y);

}  // namespace oscmult
