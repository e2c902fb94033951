#include "oscmult/grids.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oscmult {

void RadialGrid::validate() const {
  if (t.size() != v.size()) throw std::invalid_argument("radial grid: size mismatch");
  if (t.empty()) throw std::invalid_argument("radial grid: empty");
  if (t.front() < 0) throw std::invalid_argument("radial grid: t must be >= 0");
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (!(t[i] < t[i + 1])) throw std::invalid_argument("radial grid: t must increase");
}

void SpectralGrid::validate() const {
  if (lambda.size() != v.size()) throw std::invalid_argument("spectral grid: size mismatch");
  if (lambda.empty()) throw std::invalid_argument("spectral grid: empty");
  if (lambda.front() < 0) throw std::invalid_argument("spectral grid: lambda must be >= 0");
  for (std::size_t i = 0; i + 1 < lambda.size(); ++i)
    if (!(lambda[i] < lambda[i + 1]))
      throw std::invalid_argument("spectral grid: lambda must increase");
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) throw std::invalid_argument("linspace: n >= 2");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1.0);
  x.back() = b;
  return x;
}

std::vector<double> logspace(double a, double b, int n) {
  if (!(a > 0) || !(b > 0)) throw std::invalid_argument("logspace: endpoints > 0");
  std::vector<double> x = linspace(std::log(a), std::log(b), n);
  for (double& xi : x) xi = std::exp(xi);
  x.back() = b;
  return x;
}

void write_grid_csv(const std::string& path, const std::string& node_name,
                    const std::vector<double>& nodes, const std::vector<cxd>& values,
                    const std::string& provenance) {
  if (nodes.size() != values.size()) throw std::invalid_argument("csv: size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# " << provenance << "\n";
  out << node_name << ",re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", nodes[i], values[i].real(),
                  values[i].imag());
    out << buf;
  }
}

namespace {

void read_csv(const std::string& path, std::vector<double>& nodes, std::vector<cxd>& values) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (std::isalpha(static_cast<unsigned char>(line[0]))) continue;  // header row
    std::istringstream ss(line);
    double a, b, c;
    char comma;
    if (!(ss >> a >> comma >> b >> comma >> c))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad csv row");
    nodes.push_back(a);
    values.emplace_back(b, c);
  }
}

}  // namespace

RadialGrid read_radial_csv(const std::string& path) {
  RadialGrid g;
  read_csv(path, g.t, g.v);
  g.validate();
  return g;
}

SpectralGrid read_spectral_csv(const std::string& path) {
  SpectralGrid g;
  read_csv(path, g.lambda, g.v);
  g.validate();
  return g;
}

}  // namespace oscmult
