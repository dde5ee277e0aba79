#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dbarlab {

using cdouble = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Thrown on contract violations (bad sizes, unsolvable inputs, solver
/// failures). Message names the offending input.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

/// Uniform periodic grid on [0,2pi)^2. nx, ny even and >= 8 so the Nyquist
/// mode is unambiguous. Node (j,k) sits at (j*dx, k*dy), index k*nx + j
/// (x fastest).
struct TorusGrid {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;

  int size() const { return nx * ny; }
  int index(int j, int k) const { return k * nx + j; }
  double x(int j) const { return j * dx; }
  double y(int k) const { return k * dy; }
  double cell_area() const { return dx * dy; }

  bool operator==(const TorusGrid& o) const {
    return nx == o.nx && ny == o.ny;
  }
};

TorusGrid make_grid(int nx, int ny);

struct ScalarField {
  TorusGrid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const TorusGrid& g, double fill = 0.0)
      : grid(g), values(static_cast<size_t>(g.size()), fill) {}

  double& at(int j, int k) { return values[grid.index(j, k)]; }
  double at(int j, int k) const { return values[grid.index(j, k)]; }
};

struct ComplexField {
  TorusGrid grid;
  std::vector<cdouble> values;

  ComplexField() = default;
  explicit ComplexField(const TorusGrid& g, cdouble fill = {})
      : grid(g), values(static_cast<size_t>(g.size()), fill) {}

  cdouble& at(int j, int k) { return values[grid.index(j, k)]; }
  cdouble at(int j, int k) const { return values[grid.index(j, k)]; }
};

/// Sample f(x,y) at every node.
template <class F>
ScalarField sample(const TorusGrid& g, F&& f) {
  ScalarField out(g);
  for (int k = 0; k < g.ny; ++k)
    for (int j = 0; j < g.nx; ++j) out.at(j, k) = f(g.x(j), g.y(k));
  return out;
}

template <class F>
ComplexField sample_complex(const TorusGrid& g, F&& f) {
  ComplexField out(g);
  for (int k = 0; k < g.ny; ++k)
    for (int j = 0; j < g.nx; ++j) out.at(j, k) = f(g.x(j), g.y(k));
  return out;
}

double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
double max_abs(const ScalarField& f);
double mean(const ScalarField& f);
double sup_distance(const ScalarField& a, const ScalarField& b);
bool all_finite(const ScalarField& f);
bool all_finite(const ComplexField& f);

/// Bilinear interpolation with periodic wrap; (x,y) in physical coordinates.
double interp_bilinear(const ScalarField& f, double x, double y);

}  // namespace dbarlab
