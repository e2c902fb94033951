#include "oscmult/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "oscmult/parallel.hpp"
#include "oscmult/special.hpp"

namespace oscmult {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Spectral truncation for the damped wave symbol: far enough out that both
// the sigma damping e^{-sigma lambda^alpha} and (when present) the Gaussian
// regularizer have killed the integrand relative to the e^{-2 rho t} scale of
// the kernel at the farthest requested radius.
double wave_lambda_max(const SpaceParams& sp, double sigma, double alpha, double t_worst,
                       double eps) {
  const double budget = 34.0 + 2.2 * sp.rho * t_worst;
  double lam = std::pow(budget / sigma, 1.0 / alpha);
  if (eps > 1e-12) lam = std::min(lam, std::sqrt(budget / eps));
  return std::clamp(lam, 40.0, 2000.0);
}

// Crude absolute noise floor of the quadrature for a damped wave kernel:
// machine epsilon times the L1 mass of the spectral integrand against the
// ground-state envelope |phi_lambda(t)| <~ (1+t) e^{-rho t}.
double wave_noise_floor(const SpaceParams& sp, double sigma, double alpha, double t,
                        double calibration) {
  const double mass =
      std::exp(std::lgamma(sp.n / alpha)) / (alpha * std::pow(sigma, sp.n / alpha));
  return 5e-15 * calibration * mass * (1.0 + t) * std::exp(-sp.rho * t);
}

QuadratureOptions wave_options(const SpaceParams& sp, double sigma, double alpha,
                               double t_worst, const QuadratureOptions& user) {
  QuadratureOptions opts = user;
  if (opts.lambda_max <= 0.0)
    opts.lambda_max = wave_lambda_max(sp, sigma, alpha, t_worst, user.epsilon);
  // The symbol supplies its own spectral decay; keep the regularizer inert
  // unless the caller asked for a specific one.
  if (opts.epsilon <= 0.0) {
    opts.epsilon = 1e-14;
    opts.richardson = false;
  }
  return opts;
}

}  // namespace

void WaveKernelSpec::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("WaveKernelSpec: sigma must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("WaveKernelSpec: alpha must be positive");
}

cxd wave_symbol(const WaveKernelSpec& spec, cxd lambda) {
  const cxd w = lambda * lambda + spec.sp.rho * spec.sp.rho;
  const cxd a = std::exp(0.5 * spec.alpha * std::log(w));
  return std::exp(cxd(-spec.sigma, 1.0) * a);
}

InverseResult wave_kernel(const WaveKernelSpec& spec, const std::vector<double>& ts,
                          const QuadratureOptions& opts) {
  spec.validate();
  if (ts.empty()) throw std::invalid_argument("wave_kernel: no radii");
  const auto symbol = [spec](cxd z) { return wave_symbol(spec, z); };
  if (opts.lambda_max > 0.0) {
    // Caller pinned the spectral window; one shared call.
    const double t_worst = *std::max_element(ts.begin(), ts.end());
    const QuadratureOptions o = wave_options(spec.sp, spec.sigma, spec.alpha, t_worst, opts);
    return inverse_transform(spec.sp, symbol, ts, o);
  }

  // The spectral window a radius needs grows with the radius (the kernel there
  // is exponentially small, so the integrand tail must be driven further
  // down). Choose it per node, snapped to a geometric grid so nodes share
  // calls, and keep each value a function of its own radius only — never of
  // which other radii happened to be requested alongside it.
  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double raw = wave_lambda_max(spec.sp, spec.sigma, spec.alpha, ts[i], opts.epsilon);
    double q = 40.0;
    while (q < raw - 1e-9 && q < 2000.0) q *= 1.5;
    groups[std::min(q, 2000.0)].push_back(i);
  }

  InverseResult res;
  res.grid.t = ts;
  res.grid.v.assign(ts.size(), cxd(0.0));
  res.value_eps.assign(ts.size(), cxd(0.0));
  res.value_eps_half.assign(ts.size(), cxd(0.0));
  res.error_estimate.assign(ts.size(), 0.0);
  for (const auto& [lam_q, members] : groups) {
    std::vector<double> sub;
    sub.reserve(members.size());
    for (std::size_t i : members) sub.push_back(ts[i]);
    QuadratureOptions go = opts;
    go.lambda_max = lam_q;
    const double t_worst = *std::max_element(sub.begin(), sub.end());
    const QuadratureOptions o = wave_options(spec.sp, spec.sigma, spec.alpha, t_worst, go);
    const InverseResult part = inverse_transform(spec.sp, symbol, sub, o);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const std::size_t i = members[k];
      res.grid.v[i] = part.grid.v[k];
      res.value_eps[i] = part.value_eps[k];
      res.value_eps_half[i] = part.value_eps_half[k];
      res.error_estimate[i] = part.error_estimate[k];
    }
    res.lambda_max_used = std::max(res.lambda_max_used, part.lambda_max_used);
    res.epsilon_used = part.epsilon_used;
    res.calibration = part.calibration;
    res.axis_panels = std::max(res.axis_panels, part.axis_panels);
    res.far_panels = std::max(res.far_panels, part.far_panels);
    res.contour_width = std::max(res.contour_width, part.contour_width);
  }
  return res;
}

InverseResult oscillating_kernel(const SpaceParams& sp, const MultiplierSpec& spec,
                                 const std::vector<double>& ts, double eps,
                                 const QuadratureOptions& opts) {
  spec.validate();
  if (std::abs(spec.rho - sp.rho) > 1e-12 * std::max(1.0, sp.rho))
    throw std::invalid_argument("oscillating_kernel: spec.rho disagrees with the space");
  if (spec.beta.real() < 0.5 * (sp.n + 1) && !(eps > 0.0))
    throw std::invalid_argument(
        "oscillating_kernel: regularizer eps > 0 required for slowly decaying symbols");
  QuadratureOptions o = opts;
  o.epsilon = eps > 0.0 ? eps : 1e-14;
  if (o.lambda_max <= 0.0) o.lambda_max = 200.0;
  return inverse_transform(
      sp, [spec](cxd z) { return eval_m(spec, z); }, ts, o);
}

double smoothstep_down(int order, double x) {
  if (order < 1 || order > 15)
    throw std::invalid_argument("smoothstep_down: order must lie in [1, 15]");
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  // S_N(x) = x^{N+1} sum_{k=0}^{N} C(N+k, k) C(2N+1, N-k) (-x)^k rises from
  // 0 to 1 with N vanishing derivatives at both ends; we descend.
  const int N = order;
  double sum = 0.0;
  for (int k = N; k >= 0; --k) {
    double c1 = 1.0, c2 = 1.0;
    for (int j = 1; j <= k; ++j) c1 = c1 * (N + j) / j;
    for (int j = 1; j <= N - k; ++j) c2 = c2 * (N + k + 1 + j) / j;
    const double term = c1 * c2 * ((k % 2 == 0) ? 1.0 : -1.0);
    sum = sum * x + term;  // builds sum_{k} coeff_k x^{k} by Horner
  }
  double rise = sum;
  for (int j = 0; j <= N; ++j) rise *= x;
  return 1.0 - rise;
}

KernelSplit split_kernel(const RadialGrid& kappa, int cutoff_order) {
  kappa.validate();
  if (!(kappa.t_max() > 2.0))
    throw std::invalid_argument("split_kernel: grid must extend beyond t = 2");
  int inside = 0;
  for (double t : kappa.t)
    if (t >= 1.0 && t <= 2.0) ++inside;
  if (inside < 16)
    throw std::invalid_argument("split_kernel: need at least 16 nodes in [1, 2]");

  KernelSplit out;
  out.cutoff_order = cutoff_order;
  out.kappa0.t = kappa.t;
  out.kappa_inf.t = kappa.t;
  out.kappa0.v.resize(kappa.t.size());
  out.kappa_inf.v.resize(kappa.t.size());
  for (std::size_t i = 0; i < kappa.t.size(); ++i) {
    const double chi = smoothstep_down(cutoff_order, kappa.t[i] - 1.0);
    // Multiply out the larger factor and take the smaller as the difference:
    // with the multiplier >= 1/2 the subtraction is exact (Sterbenz), so the
    // two pieces sum back to the input bit for bit on every node.
    if (chi >= 0.5) {
      out.kappa0.v[i] = kappa.v[i] * chi;
      out.kappa_inf.v[i] = kappa.v[i] - out.kappa0.v[i];
    } else {
      out.kappa_inf.v[i] = kappa.v[i] * (1.0 - chi);
      out.kappa0.v[i] = kappa.v[i] - out.kappa_inf.v[i];
    }
  }
  return out;
}

DecayReport decay_check_q1(const SpaceParams& sp, double sigma, double t_lo, double t_hi,
                           int points) {
  if (!(sigma > 0.0)) throw std::invalid_argument("decay_check_q1: sigma must be positive");
  if (!(t_hi > t_lo) || points < 8)
    throw std::invalid_argument("decay_check_q1: need t_lo < t_hi and >= 8 points");
  if (sigma <= 1.0 && t_lo < 2.0)
    throw std::domain_error("decay_check_q1: the sigma <= 1 decay law starts at t = 2");

  DecayReport rep;
  rep.t = linspace(t_lo, t_hi, points);
  const WaveKernelSpec spec{sp, sigma, 1.0};
  const InverseResult q = wave_kernel(spec, rep.t);

  rep.normalized.resize(rep.t.size());
  rep.usable_t_max = t_lo;
  bool noise_hit = false;
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    const double t = rep.t[i];
    const double mag = std::abs(q.grid.v[i]);
    rep.normalized[i] = mag * std::pow(t + 1.0, 1.5) * std::exp(2.0 * sp.rho * t);
    const double floor = wave_noise_floor(sp, sigma, 1.0, t, q.calibration);
    if (!noise_hit && mag > 20.0 * floor) rep.usable_t_max = t;
    if (mag <= 20.0 * floor) noise_hit = true;
  }

  const double mid = t_lo + 0.5 * (t_hi - t_lo);
  double sup_mid = 0.0;
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    if (rep.t[i] > rep.usable_t_max) break;
    rep.sup = std::max(rep.sup, rep.normalized[i]);
    if (rep.t[i] <= mid) sup_mid = std::max(sup_mid, rep.normalized[i]);
  }
  // Stable when the first half of the usable range already saw the sup and
  // the noise floor didn't swallow the window early.
  rep.stable = rep.usable_t_max >= mid && rep.sup <= sup_mid * 1.05;
  return rep;
}

namespace {

struct L1Nodes {
  std::vector<double> t, w;  // quadrature nodes/weights on (0, T]
};

L1Nodes l1_panel_nodes(double t0, double T) {
  const quad::Rule& gl = quad::gauss_legendre(12);
  L1Nodes out;
  std::vector<double> edges{t0};
  double x = t0;
  while (x < 2.0) {
    x = std::min(2.0, x * 1.3);
    edges.push_back(x);
  }
  while (x < T) {
    x = std::min(T, x + 0.5);
    edges.push_back(x);
  }
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1], h = 0.5 * (b - a);
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
      out.t.push_back(a + h * (1.0 + gl.x[j]));
      out.w.push_back(h * gl.w[j]);
    }
  }
  return out;
}

}  // namespace

double l1_norm(const SpaceParams& sp, double sigma, double alpha) {
  const WaveKernelSpec spec{sp, sigma, alpha};
  spec.validate();
  const double T = 8.0;
  const double t0 = std::min(1e-3, sigma / 50.0);
  const L1Nodes nodes = l1_panel_nodes(t0, T);
  const InverseResult q = wave_kernel(spec, nodes.t);

  double interior = 0.0;
  for (std::size_t i = 0; i < nodes.t.size(); ++i)
    interior += nodes.w[i] * std::abs(q.grid.v[i]) * cartan_density(sp, nodes.t[i]);
  // [0, t0] stub: J ~ t^{n-1} there, so the missing mass is below
  // |q(t0)| J(t0) t0 / n.
  interior += std::abs(q.grid.v.front()) * cartan_density(sp, t0) * t0 / sp.n;

  // Envelope constant from the decay window, noise-checked.
  double c_fit = 0.0;
  bool have_fit = false;
  for (std::size_t i = 0; i < nodes.t.size(); ++i) {
    const double t = nodes.t[i];
    if (t < T - 2.5) continue;
    const double mag = std::abs(q.grid.v[i]);
    if (mag <= 20.0 * wave_noise_floor(sp, sigma, alpha, t, q.calibration))
      throw NumericsError("l1_norm: tail window dominated by quadrature noise", t);
    c_fit = std::max(c_fit, mag * std::pow(t + 1.0, 1.5) * std::exp(2.0 * sp.rho * t));
    have_fit = true;
  }
  if (!have_fit) throw NumericsError("l1_norm: empty tail window", T);

  // J e^{-2 rho t} <= 1, so the tail mass is below the doubled envelope
  // integral 2 c int_T^inf (t+1)^{-3/2} dt.
  const double tail = 2.0 * c_fit * 2.0 / std::sqrt(T + 1.0);
  return interior + tail;
}

LineFit l1_scaling_fit(const SpaceParams& sp, const std::vector<double>& sigmas) {
  if (sigmas.size() < 6)
    throw std::invalid_argument("l1_scaling_fit: need at least 6 sigma samples");
  for (double s : sigmas)
    if (!(s > 0.0) || s > 0.5)
      throw std::invalid_argument("l1_scaling_fit: sigmas must lie in (0, 1/2]");
  std::vector<double> lx(sigmas.size()), ly(sigmas.size());
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    lx[i] = std::log(sigmas[i]);
    ly[i] = std::log(l1_norm(sp, sigmas[i], 1.0));
  }
  return fit_line(lx, ly);
}

cxd subordination_assemble(const SpaceParams& sp, double alpha, cxd beta, double t,
                           double eps, int panels_per_unit) {
  if (!(alpha > 0.0)) throw std::invalid_argument("subordination_assemble: alpha > 0");
  if (!(beta.real() > 0.0))
    throw std::invalid_argument("subordination_assemble: Re beta must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("subordination_assemble: t must be positive");
  if (!(eps > 0.0))
    throw std::invalid_argument("subordination_assemble: regularizer eps must be positive");
  if (panels_per_unit < 1)
    throw std::invalid_argument("subordination_assemble: panels_per_unit >= 1");

  const cxd s = beta / alpha;
  if (s.real() < 0.05)
    throw NumericsError("subordination_assemble: sigma power too singular to resolve",
                        s.real());

  // sigma = e^u turns int_0^inf sigma^{s-1} q_sigma dsigma into
  // int e^{s u} q(e^u) du with exponential decay at both ends: e^{Re s u}
  // below (q stays bounded by the eps-regularized mass) and the sigma
  // damping e^{-sigma rho^alpha}, plus the spectral floor of the shared
  // truncation, above.
  const double u_min = -(34.0 + 0.5 * sp.n * std::log(1.0 / eps)) / s.real();
  const double u_max = std::log(38.0 / std::pow(sp.rho, alpha)) + 1.0;
  const quad::Rule& gl = quad::gauss_legendre(16);

  // All wave kernels share one truncation so the assembled sum and a direct
  // oscillating_kernel call regularize identically.
  const double lam_shared = std::sqrt((34.0 + 2.2 * sp.rho * t) / eps);

  struct Node {
    double u, w;
  };
  std::vector<Node> nodes;
  // Split at sigma = 1 (u = 0); uniform panels on each side.
  for (int side = 0; side < 2; ++side) {
    const double lo = side == 0 ? u_min : 0.0;
    const double hi = side == 0 ? 0.0 : u_max;
    const int panels =
        std::max(1, static_cast<int>(std::ceil((hi - lo) * panels_per_unit)));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = lo + p * h;
      for (std::size_t j = 0; j < gl.x.size(); ++j)
        nodes.push_back({a + 0.5 * h * (1.0 + gl.x[j]), 0.5 * h * gl.w[j]});
    }
  }

  std::vector<cxd> contrib(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    const double sigma = std::exp(nodes[i].u);
    QuadratureOptions o;
    o.epsilon = eps;
    o.lambda_max = std::min(wave_lambda_max(sp, sigma, alpha, t, eps), lam_shared);
    const WaveKernelSpec wspec{sp, sigma, alpha};
    const InverseResult q = inverse_transform(
        sp, [wspec](cxd z) { return wave_symbol(wspec, z); }, {t}, o);
    contrib[i] = nodes[i].w * std::exp(s * nodes[i].u) * q.grid.v[0];
  });

  cxd acc(0.0, 0.0);
  for (const cxd& c : contrib) acc += c;
  return acc * std::exp(-log_gamma(s));
}

void write_kernel_table(const std::string& path, const SpaceParams& sp,
                        const InverseResult& res) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_kernel_table: cannot open " + path);
  char line[256];
  std::snprintf(line, sizeof(line),
                "# space=%s:%d rho=%.17g epsilon=%.17g lambda_max=%.17g\n",
                family_name(sp.family).c_str(), sp.k, sp.rho, res.epsilon_used,
                res.lambda_max_used);
  out << line << "t,re,im,abs,envelope_ratio\n";
  for (std::size_t i = 0; i < res.grid.t.size(); ++i) {
    const double t = res.grid.t[i];
    const double mag = std::abs(res.grid.v[i]);
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", t,
                  res.grid.v[i].real(), res.grid.v[i].imag(), mag,
                  mag * std::pow(t + 1.0, 1.5) * std::exp(2.0 * sp.rho * t));
    out << line;
  }
}

}  // namespace oscmult
