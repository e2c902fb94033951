#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "oscmult/geometry.hpp"
#include "oscmult/quadrature.hpp"
#include "oscmult/special.hpp"

using namespace oscmult;
using std::abs;

namespace {

double rel_err(cxd got, cxd want) {
  const double scale = std::max(1e-300, abs(want));
  return abs(got - want) / scale;
}

// Reference radial solution by RK4 on the second-order equation
//   u'' + ((2a+1) coth t + (2b+1) tanh t) u' + (lam^2 + rho^2) u = 0,
// u(0) = 1, u'(0) = 0, started just off the singular endpoint with the
// quadratic Taylor term. Independent of every series in the library.
double phi_ode_oracle(const SpaceParams& sp, double eta_imag, double t_end) {
  // lambda = -i eta_imag (or 0): the solution is real.
  const double mu2 = sp.rho * sp.rho - eta_imag * eta_imag;  // lam^2 + rho^2
  const double a = sp.jacobi_a, b = sp.jacobi_b;
  double t = 1e-4;
  double u = 1.0 - mu2 * t * t / (4.0 * (a + 1.0));
  double v = -mu2 * t / (2.0 * (a + 1.0));
  auto acc = [&](double tt, double uu, double vv) {
    const double coef = (2.0 * a + 1.0) / std::tanh(tt) + (2.0 * b + 1.0) * std::tanh(tt);
    return -coef * vv - mu2 * uu;
  };
  const double h = 2.5e-5;
  while (t < t_end - 1e-12) {
    const double step = std::min(h, t_end - t);
    const double k1u = v, k1v = acc(t, u, v);
    const double k2u = v + 0.5 * step * k1v, k2v = acc(t + 0.5 * step, u + 0.5 * step * k1u, v + 0.5 * step * k1v);
    const double k3u = v + 0.5 * step * k2v, k3v = acc(t + 0.5 * step, u + 0.5 * step * k2u, v + 0.5 * step * k2v);
    const double k4u = v + step * k3v, k4v = acc(t + step, u + step * k3u, v + step * k3v);
    u += step / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    t += step;
  }
  return u;
}

}  // namespace

TEST_CASE("log gamma: pinned values and functional equation") {
  CHECK(abs(log_gamma(cxd(1.0))) < 1e-14);
  CHECK(log_gamma(cxd(0.5)).real() == doctest::Approx(0.5723649429).epsilon(1e-9));

  // Gamma(1/2) against the defining integral (substitute t = s^2 to kill the
  // endpoint singularity: integral = 2 int_0^inf e^{-s^2} ds).
  const double gamma_half =
      2.0 * oracles::integrate([](double s) { return std::exp(-s * s); }, 0.0, 12.0);
  CHECK(std::exp(log_gamma(cxd(0.5)).real()) == doctest::Approx(gamma_half).epsilon(1e-10));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ur(0.05, 20.0), ui(-20.0, 20.0);
  for (int i = 0; i < 100; ++i) {
    const cxd z(ur(rng), ui(rng));
    const cxd lhs = log_gamma(z + 1.0);
    const cxd rhs = log_gamma(z) + std::log(z);
    CHECK(abs(lhs - rhs) / (1.0 + abs(lhs)) < 1e-12);
  }

  // reflection side: Gamma(-1/2) = -2 sqrt(pi)
  const cxd gm = std::exp(log_gamma(cxd(-0.5)));
  CHECK(rel_err(gm, cxd(-3.5449077018110322)) < 1e-11);

  CHECK_THROWS_AS(log_gamma(cxd(0.0)), std::domain_error);
  CHECK_THROWS_AS(log_gamma(cxd(-3.0)), std::domain_error);

  // no overflow far up the imaginary axis
  const cxd big = log_gamma(cxd(0.0, 800.0));
  CHECK(std::isfinite(big.real()));
  CHECK(std::isfinite(big.imag()));
}

TEST_CASE("gauss 2f1: closed forms and Euler integral oracle") {
  CHECK(rel_err(gauss_2f1(1.0, 1.0, 2.0, -1.0), cxd(std::log(2.0))) < 1e-12);
  CHECK(rel_err(gauss_2f1(0.5, 0.5, 1.5, -1.0), cxd(std::asinh(1.0))) < 1e-12);
  CHECK(rel_err(gauss_2f1(0.5, 0.5, 1.5, -1.0), cxd(0.881374)) < 1e-6);
  CHECK(gauss_2f1(0.3, 0.7, 1.1, 0.0) == cxd(1.0));

  // Euler integral for real c > b > 0 (a may be complex), with s = u^2 so the
  // s^(b-1) endpoint is polynomial:
  //   2F1(a,b;c;x) = B(b, c-b)^{-1} int_0^1 2 u^(2b-1) (1-u^2)^(c-b-1) (1-x u^2)^(-a) du
  auto euler = [](cxd a, double b, double c, double x) {
    const cxd lb = log_gamma(cxd(c)) - log_gamma(cxd(b)) - log_gamma(cxd(c - b));
    const cxd val = oracles::integrate_c(
        [&](double u) {
          if (u <= 0.0 || u >= 1.0) return cxd(0.0);
          const double s = u * u;
          return 2.0 * std::exp((2.0 * b - 1.0) * std::log(u) + (c - b - 1.0) * std::log(1.0 - s) -
                                a * std::log(cxd(1.0 - x * s)));
        },
        0.0, 1.0, 1e-12);
    return std::exp(lb) * val;
  };
  struct Case { cxd a; double b, c, x; };
  const Case cases[] = {
      {cxd(0.5, -1.0), 1.0, 2.5, -0.3},
      {cxd(0.5, -1.0), 1.0, 2.5, -3.0},
      {cxd(1.0, -2.5), 1.5, 3.0, -0.49},
      {cxd(1.0, -2.5), 1.5, 3.0, -0.51},
      {cxd(2.0, 0.0), 1.2, 3.3, -8.0},
  };
  for (const Case& cs : cases)
    CHECK(rel_err(gauss_2f1(cs.a, cs.b, cs.c, cs.x), euler(cs.a, cs.b, cs.c, cs.x)) < 1e-8);

  // continuity across the series/transformation switch at |x| = 1/2
  for (double lam : {0.7, 4.0}) {
    const cxd a(0.5, -0.5 * lam), b(0.5, 0.5 * lam), c(1.5);
    const cxd lo = gauss_2f1(a, b, c, -0.5 + 1e-9);
    const cxd hi = gauss_2f1(a, b, c, -0.5 - 1e-9);
    CHECK(abs(lo - hi) < 1e-8);
  }

  CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, 2.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, cxd(-2.0), -0.3), std::domain_error);
}

TEST_CASE("spherical function: closed form on H3") {
  const SpaceParams h3 = make_space(Family::RealHyp, 3);

  // phi_lambda(t) = sin(lambda t)/(lambda sinh t)
  for (double lam : {0.3, 1.0, 5.0, 20.0}) {
    for (double t = 0.1; t <= 5.0; t += 0.17) {
      const cxd got = spherical_phi(h3, cxd(lam), t);
      const cxd want = oracles::h3_phi(cxd(lam), t);
      CHECK(rel_err(got, want) < 1e-8);
      CHECK(abs(got.imag()) < 1e-10);
    }
  }
  CHECK(spherical_phi(h3, cxd(1.0), 1.0).real() ==
        doctest::Approx(std::sin(1.0) / std::sinh(1.0)).epsilon(1e-10));

  // imaginary spectral parameter: sinh(eta t)/(eta sinh t)
  const cxd li(0.0, -0.5);
  CHECK(spherical_phi(h3, li, 2.0).real() ==
        doctest::Approx(std::sinh(1.0) / (0.5 * std::sinh(2.0))).epsilon(1e-10));
  CHECK(spherical_phi(h3, li, 2.0).real() == doctest::Approx(0.648054).epsilon(1e-5));

  // the two internal evaluation routes hand over consistently at large t
  for (double lam : {0.5, 5.0, 60.0}) {
    for (double t : {6.0, 12.0, 20.0, 28.0}) {
      const cxd got = spherical_phi(h3, cxd(lam), t);
      CHECK(rel_err(got, oracles::h3_phi(cxd(lam), t)) < 1e-8);
    }
  }
}

TEST_CASE("spherical function: normalization, bounds, symmetry") {
  for (const SpaceParams& sp : {make_space(Family::RealHyp, 3), make_space(Family::RealHyp, 2),
                                make_space(Family::ComplexHyp, 2), make_space(Family::QuatHyp, 2)}) {
    CHECK(spherical_phi(sp, cxd(2.0), 0.0) == cxd(1.0));
    // |phi| <= 1 for real lambda
    for (double lam : {0.0, 0.7, 3.0, 30.0, 150.0}) {
      for (double t : {0.05, 0.4, 1.3, 4.0, 11.0}) {
        CHECK(abs(spherical_phi(sp, cxd(lam), t)) <= 1.0 + 1e-9);
      }
    }
    // evenness
    for (double lam : {0.9, 17.0}) {
      for (double t : {0.3, 2.2, 9.0}) {
        const cxd p = spherical_phi(sp, cxd(lam), t);
        const cxd q = spherical_phi(sp, cxd(-lam), t);
        CHECK(abs(p - q) <= 1e-12 * (1.0 + abs(p)));
      }
    }
    // phi at the top of the strip is the constant function
    for (double t : {0.2, 1.0, 8.0, 25.0})
      CHECK(spherical_phi(sp, cxd(0.0, -sp.rho), t) == cxd(1.0));

    // positive and nonincreasing in t for imaginary parameter
    for (double frac : {0.15, 0.5, 0.85, 1.0}) {
      const cxd lam(0.0, -frac * sp.rho);
      double prev = 1.0 + 1e-12;
      for (double t = 0.1; t <= 12.0; t += 0.3) {
        const double val = spherical_phi(sp, lam, t).real();
        CHECK(val > 0.0);
        CHECK(val <= prev * (1.0 + 1e-9));
        prev = val;
      }
    }
  }

  const SpaceParams h3 = make_space(Family::RealHyp, 3);
  CHECK_THROWS_AS(spherical_phi(h3, cxd(0.0, 1.5), 1.0), std::domain_error);
  CHECK_THROWS_AS(spherical_phi(h3, cxd(1.0), -0.5), std::domain_error);
}

TEST_CASE("spherical function: radial equation oracle off H3") {
  // RK4 on the radial equation, imaginary and zero spectral parameter, on
  // spaces with no elementary closed form.
  const SpaceParams ch2 = make_space(Family::ComplexHyp, 2);  // rho = 2
  CHECK(abs(spherical_phi(ch2, cxd(0.0, -0.7), 2.0).real() -
            phi_ode_oracle(ch2, 0.7, 2.0)) < 1e-8);
  CHECK(abs(spherical_phi(ch2, cxd(0.0), 1.5).real() - phi_ode_oracle(ch2, 0.0, 1.5)) < 1e-8);

  // eta = 1 sits exactly on the series resonance; the perturbed evaluation
  // must still track the equation closely.
  CHECK(abs(spherical_phi(ch2, cxd(0.0, -1.0), 3.0).real() -
            phi_ode_oracle(ch2, 1.0, 3.0)) < 1e-4);
  // ... and be continuous through it
  const double lo = spherical_phi(ch2, cxd(0.0, -0.995), 3.0).real();
  const double mid = spherical_phi(ch2, cxd(0.0, -1.0), 3.0).real();
  const double hi = spherical_phi(ch2, cxd(0.0, -1.005), 3.0).real();
  CHECK(hi >= lo);  // larger eta decays slower
  CHECK(mid == doctest::Approx(0.5 * (lo + hi)).epsilon(5e-3));

  const SpaceParams quat = make_space(Family::QuatHyp, 2);
  CHECK(abs(spherical_phi(quat, cxd(0.0, -2.0), 1.5).real() -
            phi_ode_oracle(quat, 2.0, 1.5)) < 1e-6);

  // real spectral parameter on ComplexHyp: hypergeometric and asymptotic
  // routes agree on the overlap band (independent derivations).
  for (double lam : {0.8, 3.0, 9.0}) {
    for (double t : {0.55, 0.75, 0.95}) {
      const cxd via_series = detail::phi_hypergeometric(ch2, cxd(lam), t);
      const cxd via_phi = spherical_phi(ch2, cxd(lam), t);
      PhiSeries s = phi_series_prepare(ch2, cxd(lam), t);
      const cxd via_asym = phi_series_eval(s, t);
      CHECK(rel_err(via_series, via_asym) < 1e-9);
      CHECK(rel_err(via_phi, via_series) < 1e-9);
    }
  }
}

TEST_CASE("series coefficients collapse to the geometric tail on H3") {
  const SpaceParams h3 = make_space(Family::RealHyp, 3);
  for (cxd lam : {cxd(2.0), cxd(0.4, 0.0), cxd(0.0, -0.3)}) {
    const std::vector<cxd> a = detail::hc_coefficients(h3, lam, 1.0);
    REQUIRE(a.size() >= 4);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(abs(a[k] - 1.0) < 1e-11);
  }
  // H3 density factor c(lambda) = 1/(i lambda)
  CHECK(rel_err(c_function(h3, cxd(2.0)), cxd(0.0, -0.5)) < 1e-11);
}

TEST_CASE("density factor and spectral density") {
  const SpaceParams h3 = make_space(Family::RealHyp, 3);
  // H3: 1/|c|^2 = lambda^2
  for (double lam : {0.25, 1.0, 2.0, 3.0, 17.0})
    CHECK(plancherel_density(h3, lam) == doctest::Approx(lam * lam).epsilon(1e-12));
  CHECK(plancherel_density(h3, 2.0) / plancherel_density(h3, 1.0) ==
        doctest::Approx(4.0).epsilon(1e-10));
  CHECK(plancherel_density(h3, 3.0) / plancherel_density(h3, 1.0) ==
        doctest::Approx(9.0).epsilon(1e-10));
  CHECK(plancherel_density(h3, 0.0) == 0.0);

  // consistency with |c|^{-2} computed straight from the Gamma formula
  for (const SpaceParams& sp :
       {h3, make_space(Family::ComplexHyp, 3), make_space(Family::QuatHyp, 2),
        make_space(Family::OctPlane)}) {
    for (double lam : {0.4, 1.7, 24.0}) {
      const double via_c = 1.0 / std::norm(c_function(sp, cxd(lam)));
      CHECK(plancherel_density(sp, lam) == doctest::Approx(via_c).epsilon(1e-10));
      CHECK(plancherel_density(sp, lam) == plancherel_density(sp, -lam));  // exact
      CHECK(plancherel_density(sp, lam) > 0.0);
    }
  }

  // H2: large-lambda growth exponent n - 1 = 1 within 0.02
  const SpaceParams h2 = make_space(Family::RealHyp, 2);
  std::vector<double> lx, ly;
  for (double lam = 50.0; lam <= 500.0; lam *= 1.25) {
    lx.push_back(std::log(lam));
    ly.push_back(std::log(plancherel_density(h2, lam)));
  }
  const LineFit f = fit_line(lx, ly);
  CHECK(std::abs(f.slope - 1.0) < 0.02);

  // same law on the thick octonionic space: slope n - 1 = 15
  std::vector<double> ox, oy;
  const SpaceParams oct = make_space(Family::OctPlane);
  for (double lam = 200.0; lam <= 2000.0; lam *= 1.3) {
    ox.push_back(std::log(lam));
    oy.push_back(std::log(plancherel_density(oct, lam)));
  }
  CHECK(std::abs(fit_line(ox, oy).slope - 15.0) < 0.1);

  CHECK_THROWS_AS(c_function(h3, cxd(0.0)), std::domain_error);
}
