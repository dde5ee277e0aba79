#include "dbarlab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace dbarlab {

TorusGrid make_grid(int nx, int ny) {
  require(nx % 2 == 0 && ny % 2 == 0,
          "odd dimension: grid sizes must be even, got " + std::to_string(nx) +
              "x" + std::to_string(ny));
  require(nx >= 8 && ny >= 8,
          "grid too small: need nx, ny >= 8, got " + std::to_string(nx) + "x" +
              std::to_string(ny));
  TorusGrid g;
  g.nx = nx;
  g.ny = ny;
  g.dx = kTwoPi / nx;
  g.dy = kTwoPi / ny;
  return g;
}

double min_value(const ScalarField& f) {
  return *std::min_element(f.values.begin(), f.values.end());
}

double max_value(const ScalarField& f) {
  return *std::max_element(f.values.begin(), f.values.end());
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double mean(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s / static_cast<double>(f.values.size());
}

double sup_distance(const ScalarField& a, const ScalarField& b) {
  require(a.grid == b.grid, "sup_distance: grid mismatch");
  double m = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

bool all_finite(const ScalarField& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return false;
  return true;
}

bool all_finite(const ComplexField& f) {
  for (const cdouble& v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double interp_bilinear(const ScalarField& f, double x, double y) {
  const TorusGrid& g = f.grid;
  double u = x / g.dx;
  double v = y / g.dy;
  double ju = std::floor(u);
  double kv = std::floor(v);
  double tx = u - ju;
  double ty = v - kv;
  int j0 = static_cast<int>(ju) % g.nx;
  int k0 = static_cast<int>(kv) % g.ny;
  if (j0 < 0) j0 += g.nx;
  if (k0 < 0) k0 += g.ny;
  int j1 = (j0 + 1) % g.nx;
  int k1 = (k0 + 1) % g.ny;
  return (1 - tx) * (1 - ty) * f.at(j0, k0) + tx * (1 - ty) * f.at(j1, k0) +
         (1 - tx) * ty * f.at(j0, k1) + tx * ty * f.at(j1, k1);
}

}  // namespace dbarlab
