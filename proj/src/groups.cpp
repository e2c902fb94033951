#include "oscmult/groups.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "oscmult/parallel.hpp"

namespace oscmult {

namespace {

constexpr double kUnimodularTol = 1e-9;

struct Circle {
  double center, radius;
};

// Isometric circles |cz + d| = 1 of m and its inverse; only defined off the
// affine subgroup (c != 0).
void isometric_circles(const Isometry& m, Circle& fwd, Circle& bwd) {
  fwd = {-m.d / m.c, 1.0 / std::abs(m.c)};
  bwd = {m.a / m.c, 1.0 / std::abs(m.c)};
}

char letter_char(int idx, int rank) {
  return idx < rank ? char('a' + idx) : char('A' + (idx - rank));
}

int inverse_letter(int idx, int rank) { return idx < rank ? idx + rank : idx - rank; }

}  // namespace

Isometry mul(const Isometry& l, const Isometry& r) {
  return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c,
          l.c * r.b + l.d * r.d};
}

Isometry inverse(const Isometry& m) { return {m.d, -m.b, -m.c, m.a}; }

ModelPoint apply_isometry(const Isometry& m, int model_dim, const ModelPoint& p) {
  if (model_dim == 2) {
    if (p.dim != 2) throw std::invalid_argument("apply_isometry: point is not planar");
    // Explicit form with the unit determinant substituted: the naive complex
    // division recomputes ad - bc from entry products, and for long words the
    // cancellation there flattens the height to zero.
    const double x = p.c[0], h = p.c[1];
    const double W = (m.c * x + m.d) * (m.c * x + m.d) + m.c * m.c * h * h;
    const double xp = ((m.a * x + m.b) * (m.c * x + m.d) + m.a * m.c * h * h) / W;
    return ModelPoint::plane(xp, h / W);
  }
  if (model_dim != 3) throw std::invalid_argument("apply_isometry: model_dim must be 2 or 3");
  if (p.dim != 3) throw std::invalid_argument("apply_isometry: point is not spatial");
  const std::complex<double> z(p.c[0], p.c[1]);
  const double h = p.c[2];
  const std::complex<double> den = m.c * z + m.d;
  const double W = std::norm(den) + m.c * m.c * h * h;
  const std::complex<double> zp = ((m.a * z + m.b) * std::conj(den) + m.a * m.c * h * h) / W;
  return ModelPoint::space(zp.real(), zp.imag(), h / W);
}

void GroupModel::validate() const {
  if (model_dim != 2 && model_dim != 3)
    throw std::invalid_argument("GroupModel: model_dim must be 2 or 3");
  if (generators.empty()) throw std::invalid_argument("GroupModel: no generators");
  if (kind == GroupKind::Cyclic && generators.size() != 1)
    throw std::invalid_argument("GroupModel: cyclic model takes exactly one generator");
  for (const Isometry& m : generators) {
    if (std::abs(m.det() - 1.0) > kUnimodularTol)
      throw std::invalid_argument("GroupModel: generator determinant must be 1");
    if (std::abs(m.trace()) < 2.0 - 1e-12)
      throw std::invalid_argument("GroupModel: elliptic generator (|trace| < 2)");
  }
  if (kind == GroupKind::Schottky) {
    std::vector<Circle> circles;
    for (const Isometry& m : generators) {
      if (std::abs(m.c) < 1e-12)
        throw std::invalid_argument("GroupModel: Schottky generator must have c != 0");
      Circle f, b;
      isometric_circles(m, f, b);
      circles.push_back(f);
      circles.push_back(b);
    }
    for (std::size_t i = 0; i < circles.size(); ++i)
      for (std::size_t j = i + 1; j < circles.size(); ++j)
        if (std::abs(circles[i].center - circles[j].center) <=
            circles[i].radius + circles[j].radius)
          throw std::invalid_argument("GroupModel: Schottky isometric circles overlap");
  }
}

OrbitEnumeration enumerate_orbit(const GroupModel& g, const ModelPoint& x,
                                 const ModelPoint& y, int L) {
  g.validate();
  const int rank = int(g.generators.size());
  if (L < 0) throw std::invalid_argument("enumerate_orbit: negative word length");
  if (rank >= 2 && L > 18)
    throw std::invalid_argument("enumerate_orbit: word count explodes beyond L = 18");
  if (rank == 1 && L > 2000000)
    throw std::invalid_argument("enumerate_orbit: word length cap exceeded");
  if ((g.model_dim == 2) != (x.dim == 2) || x.dim != y.dim)
    throw std::invalid_argument("enumerate_orbit: basepoint dimension mismatch");

  std::vector<Isometry> letters(std::size_t(2) * rank);
  for (int i = 0; i < rank; ++i) {
    letters[i] = g.generators[i];
    letters[i + rank] = inverse(g.generators[i]);
  }

  OrbitEnumeration out;
  out.x = x;
  out.y = y;
  out.max_word_length = L;
  out.entries.push_back({"e", 0, hyperbolic_distance(x, y)});

  const int short_len = std::min(L, 3);
  std::vector<ModelPoint> short_images{y};  // identity image

  // One independent depth-first branch per first letter; explicit stacks keep
  // the traversal allocation-light and the merge order fixed.
  struct Branch {
    std::vector<OrbitEntry> entries;
    std::vector<ModelPoint> short_images;
  };
  std::vector<Branch> branches(letters.size());
  parallel_for(letters.size(), [&](std::size_t b) {
    struct Node {
      Isometry m;
      int last;
      int depth;
    };
    Branch& br = branches[b];
    std::vector<Node> stack;
    std::string word;
    if (L >= 1) stack.push_back({letters[b], int(b), 1});
    std::vector<int> path;  // letters along the current word
    while (!stack.empty()) {
      const Node node = stack.back();
      stack.pop_back();
      path.resize(std::size_t(node.depth) - 1);
      path.push_back(node.last);
      word.clear();
      for (int l : path) word.push_back(letter_char(l, rank));
      const ModelPoint image = apply_isometry(node.m, g.model_dim, y);
      br.entries.push_back({word, node.depth, hyperbolic_distance(x, image)});
      if (node.depth <= short_len) br.short_images.push_back(image);
      if (node.depth < L) {
        const int banned = inverse_letter(node.last, rank);
        // Push in reverse so children pop in letter order.
        for (int l = int(letters.size()) - 1; l >= 0; --l)
          if (l != banned) stack.push_back({mul(node.m, letters[l]), l, node.depth + 1});
      }
    }
  });
  for (Branch& br : branches) {
    out.entries.insert(out.entries.end(), br.entries.begin(), br.entries.end());
    short_images.insert(short_images.end(), br.short_images.begin(), br.short_images.end());
  }

  // Discreteness alarm: distinct short words sending the basepoint to nearly
  // the same place signal a relation or a non-discrete group.
  for (std::size_t i = 0; i < short_images.size(); ++i)
    for (std::size_t j = i + 1; j < short_images.size(); ++j)
      if (hyperbolic_distance(short_images[i], short_images[j]) < 1e-9)
        throw NumericsError("enumerate_orbit: short-word orbit collision; group is not "
                            "discrete or the word problem is nontrivial",
                            hyperbolic_distance(short_images[i], short_images[j]));

  std::vector<double> ds(out.entries.size());
  for (std::size_t i = 0; i < ds.size(); ++i) ds[i] = out.entries[i].distance;
  std::sort(ds.begin(), ds.end());
  const double d_max = ds.back();

  // Counting-function samples live inside the truncation-trustworthy window:
  // below the shortest distance realised by a full-length word, every orbit
  // point is guaranteed enumerated, so N(R) there is exact. Beyond it the
  // truncated count undercounts (words longer than L may reach in). For
  // groups with near-cancelling long words that window is much shorter than
  // d_max, and uniform sampling to d_max would waste nearly every sample.
  double r_trust = d_max;
  if (L >= 1) {
    double m = std::numeric_limits<double>::infinity();
    for (const OrbitEntry& e : out.entries)
      if (e.length == L) m = std::min(m, e.distance);
    if (std::isfinite(m)) r_trust = m;
  }
  if (r_trust > 0) {
    const int samples = 24;
    for (int i = 1; i <= samples; ++i) {
      const double r = r_trust * i / samples;
      out.count_radii.push_back(r);
      out.counts.push_back(double(std::upper_bound(ds.begin(), ds.end(), r) - ds.begin()));
    }
  }
  return out;
}

PoincarePartial poincare_partial(const OrbitEnumeration& orbit, double s) {
  if (!(s > 0)) throw std::invalid_argument("poincare_partial: s must be positive");
  PoincarePartial out;
  for (const OrbitEntry& e : orbit.entries) {
    const double term = std::exp(-s * e.distance);
    out.sum += term;
    if (e.length == orbit.max_word_length) out.last_shell += term;
  }
  return out;
}

ExponentEstimate critical_exponent_estimate(const OrbitEnumeration& orbit) {
  const int L = orbit.max_word_length;
  double r_cut = std::numeric_limits<double>::infinity();
  bool have_full_shell = false;
  for (const OrbitEntry& e : orbit.entries)
    if (e.length == L && L > 0) {
      have_full_shell = true;
      r_cut = std::min(r_cut, e.distance);
    }
  if (!have_full_shell)
    throw NumericsError("critical_exponent_estimate: no full-length shell to bound the "
                        "truncation radius", double(L));

  // Radii beyond the shortest length-L word may miss longer words; drop them.
  std::vector<double> rs, logn;
  for (std::size_t i = 0; i < orbit.count_radii.size(); ++i)
    if (orbit.count_radii[i] <= r_cut * (1 + 1e-12) && orbit.counts[i] >= 2.0) {
      rs.push_back(orbit.count_radii[i]);
      logn.push_back(std::log(orbit.counts[i]));
    }
  ExponentEstimate est;
  est.radii_used = int(rs.size());
  if (est.radii_used < 5)
    throw NumericsError("critical_exponent_estimate: fewer than 5 usable radii",
                        double(est.radii_used));
  const LineFit fit = fit_line(rs, logn);
  est.delta_hat = std::max(fit.slope, 0.0);
  est.ci = fit.slope_ci;

  // Shell-growth cross-estimator: log of the word-count ratio per unit of
  // mean-distance growth, averaged over the deepest shells.
  std::vector<double> cnt(std::size_t(L) + 1, 0.0), dsum(std::size_t(L) + 1, 0.0);
  for (const OrbitEntry& e : orbit.entries) {
    cnt[std::size_t(e.length)] += 1.0;
    dsum[std::size_t(e.length)] += e.distance;
  }
  double acc = 0.0;
  int used = 0;
  for (int k = std::max(2, L - 3); k <= L; ++k) {
    if (cnt[k] == 0 || cnt[k - 1] == 0) continue;
    const double gap = dsum[k] / cnt[k] - dsum[k - 1] / cnt[k - 1];
    if (gap < 1e-3) continue;
    acc += std::log(cnt[k] / cnt[k - 1]) / gap;
    ++used;
  }
  const double shell_est = used ? std::max(acc / used, 0.0) : 0.0;
  est.spread = std::abs(est.delta_hat - shell_est);

  const PoincarePartial pp = poincare_partial(orbit, std::max(est.delta_hat, 0.02));
  est.truncation_warning = pp.last_shell > 0.3 * pp.sum;
  return est;
}

GroupClassification classify(const GroupModel& g, const OrbitEnumeration& orbit,
                             std::optional<bool> ct_assertion) {
  g.validate();
  const ExponentEstimate est = critical_exponent_estimate(orbit);
  GroupClassification out;
  out.delta_hat = est.delta_hat;
  out.ci = est.ci;
  out.two_rho = double(g.model_dim - 1);
  if (est.delta_hat + est.ci < out.two_rho)
    out.delta_lt_2rho = TriBool::True;
  else if (est.delta_hat - est.ci > out.two_rho)
    out.delta_lt_2rho = TriBool::False;
  else
    out.delta_lt_2rho = TriBool::Indeterminate;
  out.ct_flag = ct_assertion.value_or(false);
  if (out.ct_flag)
    out.divergence_note = "convergence type asserted by the caller, not verified numerically";
  else if (out.delta_lt_2rho == TriBool::True)
    out.divergence_note = "exponent estimate below the critical value; series converges";
  else if (out.delta_lt_2rho == TriBool::Indeterminate)
    out.divergence_note = "confidence interval straddles the critical value";
  else
    out.divergence_note = "exponent estimate exceeds the theoretical ceiling; "
                          "check the enumeration depth";
  return out;
}

QuotientKernel quotient_wave_kernel(const GroupModel& g, const SpaceParams& sp,
                                    double sigma, const ModelPoint& x,
                                    const ModelPoint& y, int L, bool ct_asserted) {
  if (sp.family != Family::RealHyp || sp.k != g.model_dim)
    throw std::invalid_argument("quotient_wave_kernel: space does not match the model");
  const OrbitEnumeration orbit = enumerate_orbit(g, x, y, L);
  const double two_rho = 2.0 * sp.rho;

  double delta_eff = 0.0;
  double r_cut = 0.0;
  bool conditional = ct_asserted;
  if (L == 0) {
    // Single-term truncation: the first omitted words move the basepoint by
    // at least the shortest translation length.
    double ell_min = std::numeric_limits<double>::infinity();
    for (const Isometry& m : g.generators)
      ell_min = std::min(ell_min, 2.0 * std::acosh(std::max(1.0, std::abs(m.trace()) / 2)));
    r_cut = std::max(ell_min, 1e-3);
  } else {
    const ExponentEstimate est = critical_exponent_estimate(orbit);
    if (!ct_asserted && est.delta_hat + est.ci >= two_rho)
      throw NumericsError("quotient_wave_kernel: exponent estimate reaches 2 rho; the "
                          "series tail needs an asserted convergence type",
                          est.delta_hat);
    delta_eff = std::min(est.delta_hat + est.ci, 0.995 * two_rho);
    conditional = ct_asserted || est.delta_hat + est.ci >= two_rho;
    r_cut = std::numeric_limits<double>::infinity();
    for (const OrbitEntry& e : orbit.entries)
      if (e.length == L) r_cut = std::min(r_cut, e.distance);
  }

  // Multiplicity-compressed kernel evaluation over the distinct displacements.
  std::vector<double> ds(orbit.entries.size());
  for (std::size_t i = 0; i < ds.size(); ++i) ds[i] = orbit.entries[i].distance;
  std::sort(ds.begin(), ds.end());
  std::vector<double> uds;
  std::vector<double> mult;
  for (double d : ds) {
    if (uds.empty() || d > uds.back()) {
      uds.push_back(d);
      mult.push_back(1.0);
    } else {
      mult.back() += 1.0;
    }
  }
  WaveKernelSpec ws;
  ws.sp = sp;
  ws.sigma = sigma;
  ws.alpha = 1.0;
  const InverseResult kern = wave_kernel(ws, uds);

  QuotientKernel out;
  out.words = int(orbit.entries.size());
  out.conditional = conditional;
  for (std::size_t i = 0; i < uds.size(); ++i) out.value += mult[i] * kern.grid.v[i];

  // Envelope constant from the computed values themselves (t >= 1 where the
  // asymptotic regime holds; all nodes when everything is local).
  double cfit = 0.0;
  bool far_nodes = false;
  for (std::size_t i = 0; i < uds.size(); ++i)
    if (uds[i] >= 1.0) {
      far_nodes = true;
      cfit = std::max(cfit, std::abs(kern.grid.v[i]) * std::pow(1.0 + uds[i], 1.5) *
                                std::exp(two_rho * uds[i]));
    }
  if (!far_nodes)
    for (std::size_t i = 0; i < uds.size(); ++i)
      cfit = std::max(cfit, std::abs(kern.grid.v[i]) * std::pow(1.0 + uds[i], 1.5) *
                                std::exp(two_rho * uds[i]));
  const double margin = two_rho - delta_eff;
  out.tail_bound = 2.0 * cfit * std::pow(1.0 + r_cut, -1.5) *
                   std::exp(-margin * r_cut) / margin;
  return out;
}

NormIntegral subordination_norm_integral(int n, double p, cxd beta, double k_p) {
  if (n < 2) throw std::invalid_argument("subordination_norm_integral: n must be >= 2");
  if (!(p >= 2.0))
    throw std::invalid_argument("subordination_norm_integral: p must be >= 2 "
                                "(smaller p by duality)");
  if (!(k_p > 0)) throw std::invalid_argument("subordination_norm_integral: k_p must be positive");

  NormIntegral out;
  const double c = beta.real() - double(n - 1) * (0.5 - 1.0 / p);
  out.finite = c > 0.0;

  const quad::Rule& gl = quad::gauss_legendre(16);
  // int_1^inf sigma^{Re beta - 1} e^{-k_p sigma} dsigma, always finite.
  {
    const double span = (45.0 + 5.0 * std::max(0.0, beta.real())) / k_p;
    const int panels = 30;
    double acc = 0.0;
    for (int q = 0; q < panels; ++q) {
      const double a = 1.0 + span * q / panels, b = 1.0 + span * (q + 1) / panels;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      double panel = 0.0;
      for (std::size_t i = 0; i < gl.x.size(); ++i) {
        const double sg = mid + half * gl.x[i];
        panel += gl.w[i] * std::pow(sg, beta.real() - 1.0) * std::exp(-k_p * sg);
      }
      acc += half * panel;
    }
    out.exponential_part = acc;
  }
  if (!out.finite) {
    out.power_part = std::numeric_limits<double>::infinity();
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  // int_0^1 sigma^{c-1} dsigma = (1/c) int_{-40}^0 e^w dw after sigma = e^{w/c}.
  {
    const int panels = 20;
    double acc = 0.0;
    for (int q = 0; q < panels; ++q) {
      const double a = -40.0 + 40.0 * q / panels, b = -40.0 + 40.0 * (q + 1) / panels;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      double panel = 0.0;
      for (std::size_t i = 0; i < gl.x.size(); ++i)
        panel += gl.w[i] * std::exp(mid + half * gl.x[i]);
      acc += half * panel;
    }
    out.power_part = acc / c;
  }
  out.value = out.power_part + out.exponential_part;
  return out;
}

GroupModel read_group_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_group_config: cannot open " + path);
  GroupModel g;
  g.generators.clear();
  bool have_kind = false;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "kind") {
      std::string k;
      if (!(ls >> k)) fail("kind needs a value");
      if (k == "cyclic")
        g.kind = GroupKind::Cyclic;
      else if (k == "schottky")
        g.kind = GroupKind::Schottky;
      else if (k == "free")
        g.kind = GroupKind::FreeFuchsian;
      else
        fail("unknown kind '" + k + "'");
      have_kind = true;
    } else if (key == "model_dim") {
      if (!(ls >> g.model_dim)) fail("model_dim needs an integer");
    } else if (key == "generator") {
      Isometry m;
      if (!(ls >> m.a >> m.b >> m.c >> m.d)) fail("generator needs four numbers");
      g.generators.push_back(m);
    } else {
      fail("unknown key '" + key + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing tokens after '" + key + "'");
  }
  if (!have_kind) throw std::runtime_error(path + ": missing 'kind'");
  g.validate();
  return g;
}

void write_orbit_csv(const std::string& path, const OrbitEnumeration& orbit) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_orbit_csv: cannot open " + path);
  std::fprintf(f, "word,length,distance\n");
  for (const OrbitEntry& e : orbit.entries)
    std::fprintf(f, "%s,%d,%.17g\n", e.word.c_str(), e.length, e.distance);
  std::fclose(f);
}

}  // namespace oscmult
