#pragma once

#include <string>
#include <vector>

#include "oscmult/quadrature.hpp"

namespace oscmult {

// Radial samples (t_i, v_i), t increasing, t_0 >= 0.
struct RadialGrid {
  std::vector<double> t;
  std::vector<cxd> v;
  double t_max() const { return t.empty() ? 0.0 : t.back(); }
  void validate() const;
};

// Spectral samples (lambda_i, v_i), lambda increasing, lambda_0 >= 0.
struct SpectralGrid {
  std::vector<double> lambda;
  std::vector<cxd> v;
  double lambda_max() const { return lambda.empty() ? 0.0 : lambda.back(); }
  void validate() const;
};

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);  // geometric, a,b > 0

// CSV with a "# key=value ..." provenance line, then "node,re,im" rows.
void write_grid_csv(const std::string& path, const std::string& node_name,
                    const std::vector<double>& nodes, const std::vector<cxd>& values,
                    const std::string& provenance);
RadialGrid read_radial_csv(const std::string& path);
SpectralGrid read_spectral_csv(const std::string& path);

}  // namespace oscmult
