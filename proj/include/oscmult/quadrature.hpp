#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oscmult {

using cxd = std::complex<double>;

// Raised when a computation cannot reach the requested quality (tails too
// large, series not converged, data drowned in roundoff). Carries the
// offending magnitude so callers can report it.
class NumericsError : public std::runtime_error {
 public:
  NumericsError(const std::string& what, double magnitude = 0.0)
      : std::runtime_error(what), magnitude_(magnitude) {}
  double magnitude() const { return magnitude_; }

 private:
  double magnitude_;
};

namespace quad {

struct Rule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre rule with n points; cached, computed once by Newton
// iteration on the Legendre polynomial.
const Rule& gauss_legendre(int n);

// Fixed panel decomposition of [a, b]: `panels` equal panels, `npts`-point
// Gauss-Legendre on each. Summation runs left to right within a panel and
// panel by panel, so results do not depend on the caller's thread layout.
template <class F>
cxd panel_integrate(const F& f, double a, double b, int panels, int npts) {
  const Rule& r = gauss_legendre(npts);
  const double h = (b - a) / panels;
  cxd total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    cxd acc = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i)
      acc += r.w[i] * f(c + 0.5 * h * r.x[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

// Graded breakpoints and per-interval panel counts for an oscillatory
// integrand: enough panels that each panel sees at most ~2π of phase.
int panels_for_phase(double total_phase, int min_panels);

}  // namespace quad

// Natural cubic spline through (x_i, y_i); x strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double t) const;
  double x_min() const { return x_.empty() ? 0.0 : x_.front(); }
  double x_max() const { return x_.empty() ? 0.0 : x_.back(); }

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at knots
};

// Complex-valued spline: two real splines.
class ComplexSpline {
 public:
  ComplexSpline() = default;
  ComplexSpline(const std::vector<double>& x, const std::vector<cxd>& y);
  cxd operator()(double t) const;
  double x_min() const { return re_.x_min(); }
  double x_max() const { return re_.x_max(); }

 private:
  CubicSpline re_, im_;
};

// Least-squares line y = intercept + slope * x with a crude 95% half-width
// on the slope from the residual scatter.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_ci = 0.0;   // ~2 sigma half-width
  double residual_rms = 0.0;
  int points = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Two-regressor fit y = c0 + c1*x1 + c2*x2 (used for exp x poly decay models).
struct PlaneFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double residual_rms = 0.0;
  bool ok = false;
};
PlaneFit fit_plane(const std::vector<double>& x1, const std::vector<double>& x2,
                   const std::vector<double>& y);

}  // namespace oscmult
