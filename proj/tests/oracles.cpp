#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

namespace {

const double kPi = 3.14159265358979323846;

template <class T>
T simpson_rec(const std::function<T(double)>& f, double a, double b, T fa, T fm, T fb,
              T whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const T flm = f(lm), frm = f(rm);
  const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const T delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

template <class T>
T simpson(const std::function<T(double)>& f, double a, double b, double tol, int depth) {
  const T fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int depth) {
  return simpson<double>(f, a, b, tol, depth);
}

cxd integrate_c(const std::function<cxd(double)>& f, double a, double b, double tol,
                int depth) {
  return simpson<cxd>(f, a, b, tol, depth);
}

cxd h3_phi(cxd lambda, double t) {
  if (t == 0.0) return 1.0;
  if (std::abs(lambda) < 1e-8) {
    // sin(x)/x -> 1 - x^2/6 around 0 keeps the limit smooth.
    const cxd x = lambda * t;
    return t * (1.0 - x * x / 6.0) / std::sinh(t);
  }
  return std::sin(lambda * t) / (lambda * std::sinh(t));
}

double h3_forward(const std::function<double(double)>& f, double lambda, double t_max) {
  const double val = integrate(
      [&](double t) { return f(t) * std::sin(lambda * t) * std::sinh(t); }, 0.0, t_max);
  return 4.0 * val / lambda;
}

cxd h3_inverse(const std::function<cxd(double)>& m, double t, double lambda_max) {
  // Split into unit panels so the oscillation never starves Simpson.
  cxd acc = 0.0;
  const double step = kPi / (t + 1.0);
  double a = 0.0;
  while (a < lambda_max) {
    const double b = std::min(lambda_max, a + step);
    acc += integrate_c(
        [&](double l) { return m(l) * l * std::sin(l * t); }, a, b, 1e-12);
    a = b;
  }
  // Constant pairs with the forward convention J(t) = (2 sinh t)^2 (no solid
  // angle factor): round-trip calibration then lands on 1/(2 pi).
  return acc / (2.0 * kPi * std::sinh(t));
}

cxd symbol_m(double alpha, cxd beta, double rho, cxd lam) {
  const cxd w = lam * lam + rho * rho;
  const cxd i(0.0, 1.0);
  return std::exp(-0.5 * beta * std::log(w) + i * std::exp(0.5 * alpha * std::log(w)));
}

cxd symbol_m_derivative(double alpha, cxd beta, double rho, cxd lam, int k) {
  // m = exp(G), G = i w^{alpha/2} - (beta/2) log w, w = lam^2 + rho^2.
  // Derivatives follow from g = G', g', g'' and the exp chain.
  const cxd i(0.0, 1.0);
  const cxd w = lam * lam + rho * rho;
  auto wp = [&](double e) { return std::exp(e * std::log(w)); };  // w^e, principal
  const double a = alpha;
  const cxd g = i * a * lam * wp(0.5 * a - 1.0) - beta * lam / w;
  if (k == 0) return symbol_m(alpha, beta, rho, lam);
  if (k == 1) return symbol_m(alpha, beta, rho, lam) * g;
  const cxd gp = i * a * (wp(0.5 * a - 1.0) + (a - 2.0) * lam * lam * wp(0.5 * a - 2.0)) -
                 beta * (1.0 / w - 2.0 * lam * lam / (w * w));
  if (k == 2) return symbol_m(alpha, beta, rho, lam) * (g * g + gp);
  const cxd gpp =
      i * a * (a - 2.0) * (3.0 * lam * wp(0.5 * a - 2.0) +
                           (a - 4.0) * lam * lam * lam * wp(0.5 * a - 3.0)) +
      beta * (6.0 * lam / (w * w) - 8.0 * lam * lam * lam / (w * w * w));
  if (k == 3) return symbol_m(alpha, beta, rho, lam) * (g * g * g + 3.0 * g * gp + gpp);
  throw std::invalid_argument("symbolic derivative implemented for k <= 3");
}

}  // namespace oracles
