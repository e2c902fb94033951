#include "oscmult/quadrature.hpp"
#include "oscmult/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace oscmult {

namespace {
std::mutex g_thread_mutex;
int g_thread_cap = 0;
bool g_force_serial = false;
}  // namespace

void set_thread_cap(int n) {
  std::lock_guard<std::mutex> lk(g_thread_mutex);
  g_thread_cap = n < 0 ? 0 : n;
}
int thread_cap() {
  std::lock_guard<std::mutex> lk(g_thread_mutex);
  return g_thread_cap;
}
void set_force_serial(bool on) {
  std::lock_guard<std::mutex> lk(g_thread_mutex);
  g_force_serial = on;
}
bool force_serial() {
  std::lock_guard<std::mutex> lk(g_thread_mutex);
  return g_force_serial;
}

namespace quad {

namespace {

Rule compute_rule(int n) {
  // Newton on P_n; standard symmetric initial guesses.
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {  // recurrence up to P_n(x)
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
      }
      const double dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
    }
    const double dp = n * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.w[i] = w;
    r.x[n - 1 - i] = x;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::mutex mtx;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lk(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

int panels_for_phase(double total_phase, int min_panels) {
  const double pi = 3.14159265358979323846;
  const int by_phase = static_cast<int>(std::ceil(std::abs(total_phase) / (2 * pi))) + 1;
  return std::max(min_panels, by_phase);
}

}  // namespace quad

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size() || n < 2) throw std::invalid_argument("spline: need >= 2 matching nodes");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(x_[i] < x_[i + 1])) throw std::invalid_argument("spline: x must increase strictly");
  m_.assign(n, 0.0);
  if (n == 2) return;
  // Tridiagonal solve for natural boundary second derivatives.
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    a[i] = h0 / 6.0;
    b[i] = (h0 + h1) / 3.0;
    c[i] = h1 / 6.0;
    d[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double f = a[i] / b[i - 1];
    b[i] -= f * c[i - 1];
    d[i] -= f * d[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double t) const {
  const std::size_t n = x_.size();
  if (t <= x_.front()) t = x_.front();
  if (t >= x_.back()) t = x_.back();
  std::size_t lo = std::upper_bound(x_.begin(), x_.end(), t) - x_.begin();
  if (lo == 0) lo = 1;
  if (lo >= n) lo = n - 1;
  const std::size_t i = lo - 1;
  const double h = x_[i + 1] - x_[i];
  const double u = (x_[i + 1] - t) / h, v = (t - x_[i]) / h;
  return u * y_[i] + v * y_[i + 1] +
         ((u * u * u - u) * m_[i] + (v * v * v - v) * m_[i + 1]) * h * h / 6.0;
}

ComplexSpline::ComplexSpline(const std::vector<double>& x, const std::vector<cxd>& y) {
  std::vector<double> re(y.size()), im(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    re[i] = y[i].real();
    im[i] = y[i].imag();
  }
  re_ = CubicSpline(x, re);
  im_ = CubicSpline(x, im);
}

cxd ComplexSpline::operator()(double t) const { return {re_(t), im_(t)}; }

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) return f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / n);
  if (n > 2) {
    const double var = ss / (n - 2) / (sxx - sx * sx / n);
    f.slope_ci = 2.0 * std::sqrt(std::max(0.0, var));
  }
  f.points = static_cast<int>(n);
  return f;
}

PlaneFit fit_plane(const std::vector<double>& x1, const std::vector<double>& x2,
                   const std::vector<double>& y) {
  PlaneFit f;
  const std::size_t n = y.size();
  if (x1.size() != n || x2.size() != n || n < 4) return f;
  // Normal equations for [1, x1, x2].
  double m[3][3] = {{0}}, rhs[3] = {0};
  for (std::size_t i = 0; i < n; ++i) {
    const double row[3] = {1.0, x1[i], x2[i]};
    for (int a = 0; a < 3; ++a) {
      rhs[a] += row[a] * y[i];
      for (int b = 0; b < 3; ++b) m[a][b] += row[a] * row[b];
    }
  }
  // Gaussian elimination with partial pivoting.
  int idx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[idx[r]][col]) > std::abs(m[idx[piv]][col])) piv = r;
    std::swap(idx[col], idx[piv]);
    if (std::abs(m[idx[col]][col]) < 1e-300) return f;
    for (int r = col + 1; r < 3; ++r) {
      const double fac = m[idx[r]][col] / m[idx[col]][col];
      for (int cc = col; cc < 3; ++cc) m[idx[r]][cc] -= fac * m[idx[col]][cc];
      rhs[idx[r]] -= fac * rhs[idx[col]];
    }
  }
  double sol[3];
  for (int col = 2; col >= 0; --col) {
    double s = rhs[idx[col]];
    for (int cc = col + 1; cc < 3; ++cc) s -= m[idx[col]][cc] * sol[cc];
    sol[col] = s / m[idx[col]][col];
  }
  f.c0 = sol[0];
  f.c1 = sol[1];
  f.c2 = sol[2];
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.c0 + f.c1 * x1[i] + f.c2 * x2[i]);
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / n);
  f.ok = true;
  return f;
}

}  // namespace oscmult
