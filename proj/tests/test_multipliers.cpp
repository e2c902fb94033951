#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "oscmult/grids.hpp"
#include "oscmult/multipliers.hpp"
#include "oscmult/quadrature.hpp"
#include "oracles.hpp"

using namespace oscmult;

namespace {
double rel_gap(cxd a, cxd b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}
}  // namespace

TEST_CASE("symbol values on the real axis") {
  // alpha = 1, beta = 0 at the spectral origin: the phase is just
  // exp(i * rho) with rho = 1.
  MultiplierSpec unit{1.0, cxd(0.0, 0.0), 1.0};
  const cxd at0 = eval_m(unit, cxd(0.0, 0.0));
  CHECK(std::abs(at0 - std::exp(cxd(0.0, 1.0))) < 1e-15);
  CHECK(at0.real() == doctest::Approx(0.540302).epsilon(1e-5));
  CHECK(at0.imag() == doctest::Approx(0.841471).epsilon(1e-5));

  // Modulus law: the oscillatory factor is unimodular for real lambda, so
  // |m| = (lambda^2 + rho^2)^{-Re beta / 2}.
  MultiplierSpec damped{0.5, cxd(2.0, 0.0), 1.0};
  CHECK(std::abs(eval_m(damped, cxd(3.0, 0.0))) == doctest::Approx(0.1).epsilon(1e-13));

  std::mt19937 rng(911);
  std::uniform_real_distribution<double> lam(-20.0, 20.0);
  std::uniform_real_distribution<double> a(0.1, 3.0);
  std::uniform_real_distribution<double> br(0.0, 4.0);
  std::uniform_real_distribution<double> bi(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    MultiplierSpec s{a(rng), cxd(br(rng), bi(rng)), 0.75};
    const double x = lam(rng);
    const double expect = std::pow(x * x + s.rho * s.rho, -0.5 * s.beta.real());
    CHECK(std::abs(eval_m(s, cxd(x, 0.0))) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("symbol is even and matches the independent closed form on the strip") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> xr(-30.0, 30.0);
  std::uniform_real_distribution<double> yr(-0.95, 0.95);
  MultiplierSpec s{0.5, cxd(1.5, -0.4), 1.25};
  for (int i = 0; i < 100; ++i) {
    const cxd z(xr(rng), yr(rng) * s.rho);
    const cxd plus = eval_m(s, z);
    const cxd minus = eval_m(s, -z);
    CHECK(plus.real() == minus.real());  // exact: lambda enters only as lambda^2
    CHECK(plus.imag() == minus.imag());
    CHECK(rel_gap(plus, oracles::symbol_m(s.alpha, s.beta, s.rho, z)) < 1e-13);
  }
}

TEST_CASE("symbol domain checks") {
  MultiplierSpec s{1.0, cxd(0.0, 0.0), 1.0};
  CHECK_THROWS_AS(eval_m(s, cxd(2.0, 1.0)), std::domain_error);
  CHECK_THROWS_AS(eval_m(s, cxd(0.0, -1.0)), std::domain_error);
  CHECK_THROWS_AS(eval_m(s, cxd(5.0, 1.3)), std::domain_error);
  CHECK_NOTHROW(eval_m(s, cxd(5.0, 0.999)));

  CHECK_THROWS_AS(eval_m(MultiplierSpec{0.0, cxd(0.0, 0.0), 1.0}, cxd(1.0, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(eval_m(MultiplierSpec{1.0, cxd(-0.1, 0.0), 1.0}, cxd(1.0, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(eval_m(MultiplierSpec{1.0, cxd(0.0, 0.0), -2.0}, cxd(1.0, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("contour derivative reproduces the symbolic derivative chain") {
  MultiplierSpec cases[] = {
      {0.5, cxd(0.0, 0.0), 1.0},
      {1.0, cxd(1.0, 0.0), 1.0},
      {0.5, cxd(2.0, 0.5), 0.75},
      {2.0, cxd(0.0, 0.0), 1.5},
  };
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> lam(0.5, 40.0);
  for (const auto& s : cases) {
    for (int trial = 0; trial < 6; ++trial) {
      const double x = lam(rng);
      // Oscillatory symbols blow up off-axis like e^{alpha x r}; shrink the
      // circle with x so the extraction stays conditioned.
      const double r = std::min(0.6 * s.rho, 2.5 / (1.0 + s.alpha * x));
      for (int k = 0; k <= 3; ++k) {
        const auto d = derivative(s, k, cxd(x, 0.0), r);
        const cxd ref = oracles::symbol_m_derivative(s.alpha, s.beta, s.rho, cxd(x, 0.0), k);
        CHECK(rel_gap(d.value, ref) < 1e-8);
        CHECK(d.error < 1e-6 * (1.0 + std::abs(ref)));
      }
    }
  }

  // Order zero is the symbol itself.
  MultiplierSpec s{0.5, cxd(2.0, 0.0), 1.0};
  for (double x : {0.0, 1.0, 7.5, 120.0}) {
    const auto d0 = derivative(s, 0, cxd(x, 0.0), 0.5);
    CHECK(std::abs(d0.value - eval_m(s, cxd(x, 0.0))) < 1e-12);
  }

  // The two entry points agree exactly when fed the same symbol.
  const auto via_spec = derivative(s, 2, cxd(3.0, 0.0), 0.4);
  const auto via_fn = derivative([s](cxd z) { return eval_m(s, z); }, s.rho, 2,
                                 cxd(3.0, 0.0), 0.4);
  CHECK(via_spec.value == via_fn.value);
  CHECK(via_spec.error == via_fn.error);
}

TEST_CASE("contour derivative rejects bad orders and radii") {
  MultiplierSpec s{1.0, cxd(0.0, 0.0), 1.0};
  CHECK_THROWS_AS(derivative(s, -1, cxd(1.0, 0.0), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(derivative(s, 11, cxd(1.0, 0.0), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(derivative(s, 1, cxd(1.0, 0.0), 0.0), std::invalid_argument);
  // Circle touching or crossing |Im| = rho.
  CHECK_THROWS_AS(derivative(s, 1, cxd(1.0, 0.0), 1.0), std::domain_error);
  CHECK_THROWS_AS(derivative(s, 1, cxd(1.0, 0.5), 0.6), std::domain_error);
  CHECK_NOTHROW(derivative(s, 1, cxd(1.0, 0.5), 0.45));
}

TEST_CASE("first-derivative growth exponents") {
  // |dm/dlambda| ~ alpha * lambda^{alpha - 1} for beta = 0: slope alpha - 1
  // on a log-log fit over [10, 500].
  const auto slope_for = [](double alpha) {
    MultiplierSpec s{alpha, cxd(0.0, 0.0), 1.0};
    const auto lams = logspace(10.0, 500.0, 40);
    std::vector<double> lx, ly;
    for (double x : lams) {
      const double r = std::min(0.7, 2.5 / (1.0 + alpha * x));
      const auto d = derivative(s, 1, cxd(x, 0.0), r);
      lx.push_back(std::log(x));
      ly.push_back(std::log(std::abs(d.value)));
    }
    return fit_line(lx, ly).slope;
  };
  CHECK(slope_for(0.5) == doctest::Approx(-0.5).epsilon(0.1));
  CHECK(std::abs(slope_for(0.5) - (-0.5)) < 0.05);
  CHECK(std::abs(slope_for(2.0) - 1.0) < 0.05);
}

TEST_CASE("strip-class scan accepts the decaying symbol") {
  MultiplierSpec s{0.5, cxd(0.0, 0.0), 1.0};
  StripClassParams params{0.9, 6, 0.5};
  const auto rep = class_membership(s, params, 200.0, 0.1);
  CHECK(rep.pass);
  CHECK(rep.finite);
  CHECK(rep.stable);
  REQUIRE(rep.worst_constant.size() == 7);
  REQUIRE(rep.refined_constant.size() == 7);
  for (int k = 0; k <= 6; ++k) {
    CHECK(rep.worst_constant[k] > 0.0);
    CHECK(std::isfinite(rep.refined_constant[k]));
  }
  // k = 1 with theta = 1/2 is the borderline order: the weighted sup tends to
  // a positive limit, so both grids should see a value of order alpha/2.
  CHECK(rep.refined_constant[1] > 0.2);
  CHECK(rep.refined_constant[1] < 5.0);
}

TEST_CASE("strip-class scan on the constant symbol") {
  StripClassParams params{0.9, 6, 0.5};
  const auto rep = class_membership([](cxd) { return cxd(1.0, 0.0); }, 1.0, params,
                                    50.0, 0.1);
  CHECK(rep.pass);
  CHECK(rep.worst_constant[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.refined_constant[0] == doctest::Approx(1.0).epsilon(1e-10));
  for (int k = 1; k <= 6; ++k) {
    CHECK(rep.worst_constant[k] < 1e-4);
    CHECK(rep.refined_constant[k] < 1e-4);
  }
}

TEST_CASE("strip-class scan rejects the growing symbol") {
  // alpha = 2, beta = 1: |d^2 m| grows like lambda, so the theta = 1/2
  // weighted sup at k = 2 scales like lambda_max^2 and keeps inflating when
  // the range doubles.
  MultiplierSpec s{2.0, cxd(1.0, 0.0), 1.0};
  StripClassParams params{0.5, 2, 0.5};
  const auto rep = class_membership(s, params, 100.0, 0.1);
  CHECK_FALSE(rep.pass);
  CHECK(rep.finite);
  CHECK_FALSE(rep.stable);
  CHECK(rep.refined_constant[2] > 3.0 * rep.worst_constant[2]);
}

TEST_CASE("strip-class scan parameter validation") {
  MultiplierSpec s{0.5, cxd(0.0, 0.0), 1.0};
  CHECK_THROWS_AS(class_membership(s, StripClassParams{1.2, 4, 0.5}, 50.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(class_membership(s, StripClassParams{0.9, 0, 0.5}, 50.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(class_membership(s, StripClassParams{0.9, 11, 0.5}, 50.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(class_membership(s, StripClassParams{0.9, 4, 1.0}, 50.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(class_membership(s, StripClassParams{0.9, 4, 0.5}, 0.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(class_membership(s, StripClassParams{0.9, 4, 0.5}, 50.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(class_membership([](cxd) { return cxd(1.0, 0.0); }, 0.0,
                                   StripClassParams{0.9, 4, 0.5}, 50.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("integrability index and its duality") {
  CHECK(s_p(2.0) == 1.0);
  CHECK(s_p(4.0) == 0.5);
  CHECK(s_p(4.0 / 3.0) == doctest::Approx(s_p(4.0)).epsilon(1e-14));

  std::mt19937 rng(31);
  std::uniform_real_distribution<double> pr(1.01, 50.0);
  for (int i = 0; i < 40; ++i) {
    const double p = pr(rng);
    const double q = p / (p - 1.0);
    CHECK(s_p(p) == doctest::Approx(s_p(q)).epsilon(1e-12));
    CHECK(s_p(p) > 0.0);
    CHECK(s_p(p) <= 1.0);
  }

  CHECK_THROWS_AS(s_p(1.0), std::domain_error);
  CHECK_THROWS_AS(s_p(0.5), std::domain_error);
  CHECK_THROWS_AS(s_p(-3.0), std::domain_error);
}

TEST_CASE("strip-height exponent v(p)") {
  for (double r : {0.0, 0.3, 0.7, 1.0})
    CHECK(v_gamma(2.0, r) == doctest::Approx(r).epsilon(1e-15));
  CHECK(v_gamma(4.0, 0.5) == doctest::Approx(0.75).epsilon(1e-15));

  // Both endpoint limits collapse to 1 regardless of the ratio.
  for (double r : {0.0, 0.5, 1.0}) {
    CHECK(v_gamma(1.0 + 1e-9, r) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(v_gamma(1e9, r) == doctest::Approx(1.0).epsilon(1e-7));
  }

  CHECK_THROWS_AS(v_gamma(1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(v_gamma(2.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(v_gamma(2.0, 1.1), std::domain_error);
}

TEST_CASE("required smoothness order") {
  CHECK(smoothness_order(3, 0.5) == 5);
  CHECK(smoothness_order(2, 0.5) == 4);
  CHECK(smoothness_order(3, 0.9) == 3);
  CHECK(smoothness_order(5, 0.25) == 13);
  CHECK_THROWS_AS(smoothness_order(0, 0.5), std::domain_error);
  CHECK_THROWS_AS(smoothness_order(3, 0.0), std::domain_error);
  CHECK_THROWS_AS(smoothness_order(3, 1.0), std::domain_error);
}
