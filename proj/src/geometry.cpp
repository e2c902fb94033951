#include "oscmult/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace oscmult {

Family family_from_string(const std::string& s) {
  if (s == "RealHyp") return Family::RealHyp;
  if (s == "ComplexHyp") return Family::ComplexHyp;
  if (s == "QuatHyp") return Family::QuatHyp;
  if (s == "OctPlane") return Family::OctPlane;
  throw std::invalid_argument("unknown space family: " + s);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::RealHyp: return "RealHyp";
    case Family::ComplexHyp: return "ComplexHyp";
    case Family::QuatHyp: return "QuatHyp";
    case Family::OctPlane: return "OctPlane";
  }
  return "?";
}

SpaceParams make_space(Family f, int k) {
  SpaceParams sp{};
  sp.family = f;
  sp.k = k;
  switch (f) {
    case Family::RealHyp:
      if (k < 2) throw std::invalid_argument("RealHyp needs dimension k >= 2");
      sp.m1 = k - 1;
      sp.m2 = 0;
      break;
    case Family::ComplexHyp:
      if (k < 2) throw std::invalid_argument("ComplexHyp needs k >= 2");
      sp.m1 = 2 * k - 2;
      sp.m2 = 1;
      break;
    case Family::QuatHyp:
      if (k < 2) throw std::invalid_argument("QuatHyp needs k >= 2");
      sp.m1 = 4 * k - 4;
      sp.m2 = 3;
      break;
    case Family::OctPlane:
      if (k != 0 && k != 2) throw std::invalid_argument("OctPlane takes no k");
      sp.k = 0;
      sp.m1 = 8;
      sp.m2 = 7;
      break;
  }
  sp.n = sp.m1 + sp.m2 + 1;
  sp.rho = 0.5 * (sp.m1 + 2.0 * sp.m2);
  sp.jacobi_a = 0.5 * (sp.m1 + sp.m2 - 1.0);
  sp.jacobi_b = 0.5 * (sp.m2 - 1.0);
  return sp;
}

double cartan_density(const SpaceParams& sp, double t) {
  if (t < 0) throw std::domain_error("cartan_density: t must be >= 0");
  return std::pow(2.0 * std::sinh(t), sp.m1) * std::pow(2.0 * std::sinh(2.0 * t), sp.m2);
}

double log_cartan_density(const SpaceParams& sp, double t) {
  if (t <= 0) throw std::domain_error("log_cartan_density: t must be > 0");
  return sp.m1 * std::log(2.0 * std::sinh(t)) + sp.m2 * std::log(2.0 * std::sinh(2.0 * t));
}

ModelPoint ModelPoint::plane(double x, double height) {
  ModelPoint p;
  p.dim = 2;
  p.c = {x, height, 0.0};
  return p;
}

ModelPoint ModelPoint::space(double x1, double x2, double height) {
  ModelPoint p;
  p.dim = 3;
  p.c = {x1, x2, height};
  return p;
}

double hyperbolic_distance(const ModelPoint& x, const ModelPoint& y) {
  if (x.dim != y.dim) throw std::invalid_argument("distance: mixed model dimensions");
  if (x.dim != 2 && x.dim != 3) throw std::invalid_argument("distance: dim must be 2 or 3");
  if (!(x.height() > 0.0) || !(y.height() > 0.0))
    throw std::domain_error("distance: heights must be positive");
  // Half-angle form: sinh(d/2) = |x - y| / (2 sqrt(h_x h_y)). Equivalent to
  // cosh d = 1 + |x-y|^2/(2 h_x h_y) but never squares the large ratio, so
  // orbit points hundreds of units out stay finite, and it is exact for
  // nearly coincident points where the cosh form cancels.
  const double dx = x.c[0] - y.c[0];
  const double dy = x.c[1] - y.c[1];
  const double dz = x.dim == 3 ? x.c[2] - y.c[2] : 0.0;
  const double sep = std::hypot(dx, dy, dz);
  const double scale = std::sqrt(x.height()) * std::sqrt(y.height());
  return 2.0 * std::asinh(sep / (2.0 * scale));
}

}  // namespace oscmult
