#include "oscmult/special.hpp"

#include <cmath>
#include <stdexcept>

#include "oscmult/quadrature.hpp"

namespace oscmult {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool near_nonpositive_integer(cxd z, double tol) {
  if (z.real() > 0.5) return false;
  const double r = std::round(z.real());
  return r <= 0.0 && std::abs(z.real() - r) < tol && std::abs(z.imag()) < tol;
}

// log sin(pi z) without overflow for large |Im z|; branch jumps of 2 pi i are
// tolerated (consumers exponentiate sums of log-gammas).
cxd log_sin_pi(cxd z) {
  const double y = z.imag();
  if (std::abs(y) < 12.0) return std::log(std::sin(kPi * z));
  const cxd i(0.0, 1.0);
  if (y > 0)
    return -i * kPi * z + std::log(i * 0.5) + std::log(1.0 - std::exp(2.0 * i * kPi * z));
  return i * kPi * z + std::log(-i * 0.5) + std::log(1.0 - std::exp(-2.0 * i * kPi * z));
}

}  // namespace

cxd log_gamma(cxd z) {
  // Lanczos, g = 7, 9 terms; reflection below Re z = 1/2.
  static const double coef[] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (near_nonpositive_integer(z, 1e-13))
    throw std::domain_error("log_gamma: pole at a nonpositive integer");
  if (z.real() < 0.5)
    return std::log(kPi) - log_sin_pi(z) - log_gamma(1.0 - z);
  const cxd zz = z - 1.0;
  cxd x = coef[0];
  for (int i = 1; i < 9; ++i) x += coef[i] / (zz + static_cast<double>(i));
  const cxd t = zz + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (zz + 0.5) * std::log(t) - t + std::log(x);
}

namespace {

cxd series_2f1(cxd a, cxd b, cxd c, double x) {
  // Plain power series; callers guarantee a convergent regime.
  cxd term = 1.0, sum = 1.0;
  int small_run = 0;
  for (int k = 0; k < 200000; ++k) {
    const double kk = k;
    term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * x;
    sum += term;
    if (std::abs(term) < 1e-17 * (1.0 + std::abs(sum))) {
      if (++small_run >= 3) return sum;
    } else {
      small_run = 0;
    }
  }
  throw NumericsError("2F1 series did not converge", std::abs(term));
}

}  // namespace

cxd gauss_2f1(cxd a, cxd b, cxd c, double x) {
  if (x > 0.0) throw std::domain_error("gauss_2f1: only x <= 0 supported");
  if (near_nonpositive_integer(c, 1e-12))
    throw std::domain_error("gauss_2f1: c at a nonpositive integer");
  if (x == 0.0) return 1.0;
  if (x > -0.5) return series_2f1(a, b, c, x);
  // 2F1(a,b;c;x) = (1-x)^{-a} 2F1(a, c-b; c; x/(x-1)); the new argument lies
  // in (1/3, 1), where the series still converges for our parameter ranges.
  const double y = x / (x - 1.0);
  return std::exp(-a * std::log(1.0 - x)) * series_2f1(a, c - b, c, y);
}

cxd c_function(const SpaceParams& sp, cxd lambda) {
  if (std::abs(lambda) < 1e-14) throw std::domain_error("c_function: pole at lambda = 0");
  const cxd il = cxd(0, 1) * lambda;
  const double a = sp.jacobi_a, b = sp.jacobi_b, rho = sp.rho;
  const cxd log_c = (cxd(rho) - il) * std::log(2.0) + log_gamma(cxd(a + 1.0)) +
                    log_gamma(il) - log_gamma((cxd(rho) + il) / 2.0) -
                    log_gamma((il + (a - b + 1.0)) / 2.0);
  return std::exp(log_c);
}

double plancherel_density(const SpaceParams& sp, double lambda) {
  // 1/|c|^2 with the Gamma(i lambda) modulus written as lambda sinh(pi
  // lambda) / pi, so the lambda -> 0 zero is explicit and the result is an
  // exact even function.
  // Assembled as exp(sum of logs): the sinh factor overflows on its own near
  // lambda ~ 226 while the product only grows like lambda^(n-1).
  const double l = std::abs(lambda);
  if (l == 0.0) return 0.0;
  const double a = sp.jacobi_a, b = sp.jacobi_b, rho = sp.rho;
  const double x = kPi * l;
  const double log_lam_factor =
      (x < 1e-4) ? 2.0 * std::log(l) + std::log1p(x * x / 6.0)
                 : std::log(l) + x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0 * kPi);
  const cxd il(0.0, l);
  double s = -2.0 * rho * std::log(2.0) - 2.0 * log_gamma(cxd(a + 1.0)).real();
  s += log_lam_factor;
  s += 2.0 * log_gamma((cxd(rho) + il) / 2.0).real();
  s += 2.0 * log_gamma((il + (a - b + 1.0)) / 2.0).real();
  return std::exp(s);
}

namespace detail {

cxd phi_hypergeometric(const SpaceParams& sp, cxd lambda, double t) {
  const double sh = std::sinh(t);
  const cxd a = (cxd(sp.rho) - cxd(0, 1) * lambda) * 0.5;
  const cxd b = (cxd(sp.rho) + cxd(0, 1) * lambda) * 0.5;
  const cxd c = cxd(sp.jacobi_a + 1.0);
  return gauss_2f1(a, b, c, -sh * sh);
}

std::vector<cxd> hc_coefficients(const SpaceParams& sp, cxd lambda, double t_min) {
  const cxd il = cxd(0, 1) * lambda;  // i lambda
  const double rho = sp.rho;
  const double ab = sp.jacobi_a - sp.jacobi_b;
  const double z = std::exp(-2.0 * t_min);
  std::vector<cxd> a;
  a.reserve(64);
  a.push_back(1.0);
  cxd prev2 = 0.0, prev1 = 1.0;
  double zk = 1.0;
  int small_run = 0;
  for (int k = 1; k < 20000; ++k) {
    const cxd den = 4.0 * static_cast<double>(k) * (static_cast<double>(k) - il);
    if (std::abs(den) < 1e-10 * k)
      throw NumericsError("spherical series resonance", std::abs(den));
    const cxd e1 = il - rho - 2.0 * (k - 1.0);                 // exponent factor, previous order
    const cxd e2 = il - 2.0 * rho - 2.0 * (k - 2.0);
    const cxd num = -4.0 * ab * e1 * prev1 + (e2 * e2 + lambda * lambda) * prev2;
    const cxd ak = num / den;
    a.push_back(ak);
    prev2 = prev1;
    prev1 = ak;
    zk *= z;
    if (std::abs(ak) * zk < 1e-18) {
      if (++small_run >= 3) return a;
    } else {
      small_run = 0;
    }
  }
  throw NumericsError("spherical series needs too many terms", t_min);
}

}  // namespace detail

BranchSeries branch_series_prepare(const SpaceParams& sp, cxd lambda, double t_min) {
  BranchSeries b;
  b.lambda = lambda;
  b.rho = sp.rho;
  b.a = detail::hc_coefficients(sp, lambda, t_min);
  return b;
}

cxd branch_series_eval(const BranchSeries& s, double t) {
  const cxd expo = std::exp((cxd(0, 1) * s.lambda - s.rho) * t);
  const double z = std::exp(-2.0 * t);
  cxd sum = 0.0;
  double zk = 1.0;
  for (const cxd& ak : s.a) {
    sum += ak * zk;
    zk *= z;
  }
  return expo * sum;
}

PhiSeries phi_series_prepare(const SpaceParams& sp, cxd lambda, double t_min) {
  PhiSeries s;
  s.lambda = lambda;
  s.rho = sp.rho;
  const cxd irho(0.0, sp.rho);
  if (std::abs(lambda - irho) < 1e-13 || std::abs(lambda + irho) < 1e-13) {
    s.shortcut_one = true;
    return s;
  }
  s.cp = c_function(sp, lambda);
  s.cm = c_function(sp, -lambda);
  s.ap = detail::hc_coefficients(sp, lambda, t_min);
  s.am = detail::hc_coefficients(sp, -lambda, t_min);
  return s;
}

cxd phi_series_eval(const PhiSeries& s, double t) {
  if (s.shortcut_one) return 1.0;
  const double z = std::exp(-2.0 * t);
  const cxd ep = std::exp((cxd(0, 1) * s.lambda - s.rho) * t);
  const cxd em = std::exp((cxd(0, -1) * s.lambda - s.rho) * t);
  cxd sp_ = 0.0, sm = 0.0;
  double zk = 1.0;
  const std::size_t np = s.ap.size(), nm = s.am.size();
  const std::size_t n = np > nm ? np : nm;
  for (std::size_t k = 0; k < n; ++k) {
    if (k < np) sp_ += s.ap[k] * zk;
    if (k < nm) sm += s.am[k] * zk;
    zk *= z;
  }
  return s.cp * ep * sp_ + s.cm * em * sm;
}

namespace {

// Distance from i*lambda to the positive integers: the series recursion
// degenerates there and the two branch terms develop cancelling poles.
double resonance_distance(cxd lambda) {
  const cxd il = cxd(0, 1) * lambda;
  const double re = il.real();
  if (re < 0.5) return 1.0;
  const double k = std::round(re);
  return std::hypot(re - k, il.imag());
}

cxd phi_asymptotic(const SpaceParams& sp, cxd lambda, double t) {
  PhiSeries s = phi_series_prepare(sp, lambda, t);
  return phi_series_eval(s, t);
}

}  // namespace

cxd spherical_phi(const SpaceParams& sp, cxd lambda, double t) {
  if (t < 0) throw std::domain_error("spherical_phi: t must be >= 0");
  if (std::abs(lambda.imag()) > sp.rho + 1e-9)
    throw std::domain_error("spherical_phi: spectral parameter outside |Im| <= rho");
  const cxd irho(0.0, sp.rho);
  if (std::abs(lambda - irho) < 1e-13 || std::abs(lambda + irho) < 1e-13) return 1.0;
  const double abs2 = std::norm(lambda) + sp.rho * sp.rho;
  if (abs2 * t * t < 1e-18) return 1.0;
  if (t < 1e-6)
    return 1.0 - (lambda * lambda + sp.rho * sp.rho) * t * t / (4.0 * (sp.jacobi_a + 1.0));

  // The hypergeometric sum cancels like e^{|Re lambda| tanh t}; keep it where
  // fewer than ~5 digits die. Elsewhere the asymptotic series takes over.
  const double osc = std::abs(lambda.real()) * std::tanh(t);
  if (t <= 1.0 && osc <= 12.0) return detail::phi_hypergeometric(sp, lambda, t);

  // Near lambda = 0 and near resonances, evaluate symmetrically nearby; phi
  // is entire in lambda, the series merely degenerates.
  if (std::abs(lambda) < 1e-5) {
    const cxd d(1e-5, 0.0);
    return 0.5 * (phi_asymptotic(sp, d, t) + phi_asymptotic(sp, -d, t));
  }
  if (resonance_distance(lambda) < 1e-3) {
    const cxd shift = cxd(0, -1) * 1e-3;  // moves i lambda parallel to the real axis
    return 0.5 * (phi_asymptotic(sp, lambda + shift, t) +
                  phi_asymptotic(sp, lambda - shift, t));
  }
  return phi_asymptotic(sp, lambda, t);
}

}  // namespace oscmult
