#include "oscmult/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "oscmult/parallel.hpp"
#include "oscmult/quadrature.hpp"

namespace oscmult {

namespace {

constexpr double kLn1e8 = 18.420680743952367;
constexpr double kPi = 3.14159265358979323846;

// Total variation of arg m along a straight sample line; the oscillation
// budget that the panel count has to resolve on top of the phi phase.
double sampled_phase_variation(const std::function<cxd(cxd)>& m, cxd lo, cxd hi) {
  const int n = 256;
  double total = 0.0;
  bool have_prev = false;
  double prev = 0.0;
  for (int i = 0; i <= n; ++i) {
    const cxd z = lo + (hi - lo) * (double(i) / n);
    const cxd v = m(z);
    if (std::abs(v) < 1e-300) { have_prev = false; continue; }
    const double a = std::arg(v);
    if (have_prev) {
      double d = a - prev;
      while (d > kPi) d -= 2.0 * kPi;
      while (d < -kPi) d += 2.0 * kPi;
      total += std::abs(d);
    }
    prev = a;
    have_prev = true;
  }
  return total;
}

struct AxisPoint {
  double lambda = 0.0;
  cxd weight;        // GL weight * m * plancherel
  double damp = 0.0; // e^{-eps lambda^2}
  double damp_half = 0.0;
};

struct FarPoint {
  cxd z;       // lambda + i w
  cxd weight;  // GL weight * m(z) * e-regularizers folded separately
  cxd damp, damp_half;
  BranchSeries series;
};

// Panel edges for the shifted line. Uniform phase-sized panels, except near
// lambda = 0 where the contour passes the symbol's branch point at i rho at
// distance d = rho - w: there the integrand lives on scale d, so the panels
// grade geometrically from width d/4 outward until they meet the uniform
// width. Fixed by (lmax, uniform_panels, d) alone — never adaptive.
std::vector<double> far_panel_edges(double lmax, int uniform_panels, double d) {
  const double h = 2.0 * lmax / uniform_panels;
  std::vector<double> half;  // edges in (0, lmax]
  double x = 0.0;
  double wstep = std::max(0.25 * d, 1e-3 * h);
  while (x < lmax) {
    x = std::min(lmax, x + wstep);
    half.push_back(x);
    wstep = std::min(1.5 * wstep, h);
  }
  std::vector<double> edges;
  edges.reserve(2 * half.size() + 1);
  for (std::size_t i = half.size(); i-- > 0;) edges.push_back(-half[i]);
  edges.push_back(0.0);
  edges.insert(edges.end(), half.begin(), half.end());
  return edges;
}

}  // namespace

double calibration_constant(const SpaceParams& sp) {
  static std::map<std::pair<int, int>, double> cache;
  static std::mutex mtx;
  const auto key = std::make_pair(static_cast<int>(sp.family), sp.k);
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  // Round trip on f(t) = e^{-(t/s)^2}. s is kept small so the forward
  // integrand e^{-(t/s)^2} J(t) never grows past ~e^{rho^2 s^2} and the
  // round trip stays well-conditioned on every space.
  const double s = 0.5;
  const double t_cut = 3.5;               // e^{-(t_cut/s)^2} = e^{-49}
  const double lam_max = 2.0 * 6.0 / s;   // bump spectrum ~ e^{-(s lambda / 2)^2}
  auto f = [s](double t) { return std::exp(-(t / s) * (t / s)); };

  const int fpanels = quad::panels_for_phase(lam_max * t_cut, 16);
  auto fhat = [&](double lam) {
    return quad::panel_integrate(
        [&](double t) {
          return cxd(f(t) * cartan_density(sp, t)) * spherical_phi(sp, cxd(lam), t);
        },
        0.0, t_cut, fpanels, 16);
  };

  // Un-normalized inversion at two radii; the ratio to f fixes the constant.
  const int ipanels = quad::panels_for_phase(lam_max * 1.5, 24);
  auto raw_inverse = [&](double t) {
    return quad::panel_integrate(
        [&](double lam) {
          return fhat(lam) * spherical_phi(sp, cxd(lam), t) * plancherel_density(sp, lam);
        },
        0.0, lam_max, ipanels, 16);
  };
  const double c1 = f(0.6) / raw_inverse(0.6).real();
  const double c2 = f(1.1) / raw_inverse(1.1).real();
  if (std::abs(c1 - c2) > 1e-6 * std::abs(c1))
    throw NumericsError("calibration round trip inconsistent between radii",
                        std::abs(c1 - c2) / std::abs(c1));
  const double c = 0.5 * (c1 + c2);

  std::lock_guard<std::mutex> lock(mtx);
  cache[key] = c;
  return c;
}

SpectralGrid forward_transform(const SpaceParams& sp, const std::function<cxd(double)>& f,
                               double t_max, const std::vector<double>& lambdas,
                               int min_panels) {
  if (t_max <= 0.0) throw std::invalid_argument("forward_transform: t_max must be positive");
  if (lambdas.empty()) throw std::invalid_argument("forward_transform: empty lambda grid");
  const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
  const int panels = quad::panels_for_phase(lmax * t_max, min_panels);

  SpectralGrid out;
  out.lambda = lambdas;
  out.v.assign(lambdas.size(), cxd(0.0));
  parallel_for(lambdas.size(), [&](std::size_t i) {
    const cxd lam(lambdas[i]);
    out.v[i] = quad::panel_integrate(
        [&](double t) {
          return f(t) * cxd(cartan_density(sp, t)) * spherical_phi(sp, lam, t);
        },
        0.0, t_max, panels, 16);
  });
  return out;
}

SpectralGrid forward_transform(const SpaceParams& sp, const RadialGrid& f,
                               const std::vector<double>& lambdas) {
  f.validate();
  if (f.t.size() < 4)
    throw std::invalid_argument("forward_transform: need at least 4 radial samples");
  ComplexSpline spline(f.t, f.v);
  return forward_transform(
      sp, [&spline](double t) { return spline(t); }, f.t_max(), lambdas);
}

InverseResult inverse_transform(const SpaceParams& sp, const std::function<cxd(cxd)>& m,
                                const std::vector<double>& t_nodes,
                                const QuadratureOptions& opts) {
  if (t_nodes.empty()) throw std::invalid_argument("inverse_transform: no radii");
  // t = 0 is allowed: the spherical function there is exactly 1, so the
  // integrand degenerates to m(lambda)/|c(lambda)|^2 with no special casing.
  for (double t : t_nodes)
    if (!(t >= 0.0)) throw std::invalid_argument("inverse_transform: radii must be nonnegative");

  InverseResult res;
  res.lambda_max_used = opts.lambda_max > 0.0 ? opts.lambda_max : 60.0;
  res.epsilon_used =
      opts.epsilon > 0.0 ? opts.epsilon : kLn1e8 / (res.lambda_max_used * res.lambda_max_used);
  res.calibration = calibration_constant(sp);

  double w = 0.0;
  if (opts.contour_shift < 0.0) w = 0.9 * sp.rho;
  else if (opts.contour_shift > 0.0) w = opts.contour_shift;
  if (w >= sp.rho)
    throw std::invalid_argument("inverse_transform: contour width must stay below rho");
  if (opts.far_field_start < 0.5)
    throw std::invalid_argument("inverse_transform: far-field start below series range");

  // Node split: far nodes go to the shifted contour when one is requested.
  std::vector<std::size_t> axis_idx, far_idx;
  for (std::size_t i = 0; i < t_nodes.size(); ++i) {
    if (w > 0.0 && t_nodes[i] >= opts.far_field_start) far_idx.push_back(i);
    else axis_idx.push_back(i);
  }

  const double lmax = res.lambda_max_used;
  const double eps = res.epsilon_used;
  const quad::Rule& rule = quad::gauss_legendre(16);

  res.grid.t = t_nodes;
  res.grid.v.assign(t_nodes.size(), cxd(0.0));
  res.value_eps.assign(t_nodes.size(), cxd(0.0));
  res.value_eps_half.assign(t_nodes.size(), cxd(0.0));
  res.error_estimate.assign(t_nodes.size(), 0.0);

  // ---- axis part ----------------------------------------------------------
  // Panel counts are a function of each node's own radius, never of the batch:
  // the value returned for a given t must not depend on which other radii were
  // requested alongside it. Nodes that land on the same count share one point
  // set, so dense grids still amortize the integrand evaluations.
  if (!axis_idx.empty()) {
    const double mvar = sampled_phase_variation(m, cxd(0.0), cxd(lmax));
    // Beyond the oscillation count, the density-times-symbol envelope needs
    // panels of width ~2 to reach the quadrature's own noise floor, so phase
    // alone under-resolves short radii.
    const int amplitude_floor = static_cast<int>(std::ceil(0.5 * lmax));
    std::map<int, std::vector<std::size_t>> axis_groups;
    for (std::size_t i : axis_idx) {
      const int panels = std::max(
          quad::panels_for_phase(lmax * t_nodes[i] + mvar, opts.min_panels), amplitude_floor);
      axis_groups[panels].push_back(i);
    }
    res.axis_panels = axis_groups.rbegin()->first;

    for (const auto& [panels, members] : axis_groups) {
      std::vector<AxisPoint> pts(static_cast<std::size_t>(panels) * rule.x.size());
      const double h = lmax / panels;
      parallel_for(pts.size(), [&](std::size_t j) {
        const std::size_t p = j / rule.x.size(), q = j % rule.x.size();
        const double lam = p * h + 0.5 * h * (rule.x[q] + 1.0);
        AxisPoint& pt = pts[j];
        pt.lambda = lam;
        pt.weight = cxd(0.5 * h * rule.w[q] * plancherel_density(sp, lam)) * m(cxd(lam));
        pt.damp = std::exp(-eps * lam * lam);
        pt.damp_half = std::exp(-0.5 * eps * lam * lam);
      });

      parallel_for(members.size(), [&](std::size_t ii) {
        const std::size_t i = members[ii];
        const double t = t_nodes[i];
        cxd full(0.0), half(0.0);
        for (const AxisPoint& pt : pts) {
          const cxd phi = spherical_phi(sp, cxd(pt.lambda), t);
          const cxd base = pt.weight * phi;
          full += base * pt.damp;
          half += base * pt.damp_half;
        }
        res.value_eps[i] = res.calibration * full;
        res.value_eps_half[i] = res.calibration * half;
        res.error_estimate[i] = 2.0 * std::abs(res.value_eps_half[i] - res.value_eps[i]);
        res.grid.v[i] = opts.richardson ? 2.0 * res.value_eps_half[i] - res.value_eps[i]
                                        : res.value_eps[i];
      });
    }
  }

  // ---- shifted contour ----------------------------------------------------
  // Same per-node panel policy as the axis part. The branch series is
  // prepared for the canonical far-field start rather than the batch minimum,
  // again so that a node's value is a function of its own radius alone; the
  // truncation chosen for the smallest admissible radius is valid (and only
  // tighter) for every larger one.
  if (!far_idx.empty()) {
    res.contour_width = w;
    const cxd iw(0.0, w);
    const double mvar = sampled_phase_variation(m, cxd(-lmax) + iw, cxd(lmax) + iw);
    std::map<int, std::vector<std::size_t>> far_groups;
    for (std::size_t i : far_idx) {
      const int uniform =
          quad::panels_for_phase(2.0 * lmax * t_nodes[i] + mvar, 2 * opts.min_panels);
      far_groups[uniform].push_back(i);
    }

    for (const auto& [uniform, members] : far_groups) {
      const std::vector<double> edges = far_panel_edges(lmax, uniform, sp.rho - w);
      const std::size_t panels = edges.size() - 1;
      res.far_panels = std::max(res.far_panels, static_cast<int>(panels));

      std::vector<FarPoint> pts(panels * rule.x.size());
      parallel_for(pts.size(), [&](std::size_t j) {
        const std::size_t p = j / rule.x.size(), q = j % rule.x.size();
        const double lo = edges[p], hi = edges[p + 1];
        const cxd z = cxd(0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.x[q]) + iw;
        FarPoint& pt = pts[j];
        pt.z = z;
        pt.weight = cxd(0.5 * (hi - lo) * rule.w[q]) * m(z) / c_function(sp, -z);
        pt.damp = std::exp(-eps * z * z);
        pt.damp_half = std::exp(-0.5 * eps * z * z);
        pt.series = branch_series_prepare(sp, z, opts.far_field_start);
      });

      parallel_for(members.size(), [&](std::size_t ii) {
        const std::size_t i = members[ii];
        const double t = t_nodes[i];
        cxd full(0.0), half(0.0);
        for (const FarPoint& pt : pts) {
          const cxd base = pt.weight * branch_series_eval(pt.series, t);
          full += base * pt.damp;
          half += base * pt.damp_half;
        }
        res.value_eps[i] = res.calibration * full;
        res.value_eps_half[i] = res.calibration * half;
        res.error_estimate[i] = 2.0 * std::abs(res.value_eps_half[i] - res.value_eps[i]);
        res.grid.v[i] = opts.richardson ? 2.0 * res.value_eps_half[i] - res.value_eps[i]
                                        : res.value_eps[i];
      });
    }
  }

  return res;
}

}  // namespace oscmult
