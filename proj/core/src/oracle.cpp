#include "dbarlab/oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace dbarlab {

std::vector<cdouble> mode_operator(const std::vector<double>& dphi_y, double h,
                                   int k) {
  const int n = static_cast<int>(dphi_y.size());
  std::vector<cdouble> m = i_dy_matrix_1d(n);
  const double half_h = 0.5 * h;
  for (auto& v : m) v *= half_h;
  for (int r = 0; r < n; ++r)
    m[static_cast<size_t>(r) * n + r] +=
        cdouble(0.0, 0.5 * (h * k + dphi_y[r]));
  return m;
}

int oracle_required_k_max(const std::vector<double>& dphi_y, double h) {
  double dmax = 0.0;
  for (double v : dphi_y) dmax = std::max(dmax, std::abs(v));
  return static_cast<int>(std::ceil(2.0 * dmax / h));
}

namespace {

std::vector<double> mode_svals(const std::vector<cdouble>& m, int n) {
  std::vector<cdouble> a(m);
  std::vector<double> s(n);
  int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', n, n,
                            reinterpret_cast<lapack_complex_double*>(a.data()),
                            n, s.data(), nullptr, n, nullptr, n);
  require(info == 0, "zgesdd (mode operator) failed: " + std::to_string(info));
  return s;
}

}  // namespace

SpectrumResult oracle_spectrum(const std::vector<double>& phi_y, double h,
                               int k_max) {
  require(h > 0.0, "h must be positive");
  const int n = static_cast<int>(phi_y.size());
  require(n >= 8 && n % 2 == 0, "phi_y needs an even sample count >= 8");
  const std::vector<double> dphi = derivative_1d(phi_y);
  const int k_req = oracle_required_k_max(dphi, h);
  require(k_max >= k_req,
          "k_max too small: need k_max >= " + std::to_string(k_req) +
              " so every singular value below the working threshold is "
              "captured");

  SpectrumResult result;
  result.h = h;
  result.svals.reserve(static_cast<size_t>(2 * k_max + 1) * n);
  for (int k = -k_max; k <= k_max; ++k) {
    auto s = mode_svals(mode_operator(dphi, h, k), n);
    result.svals.insert(result.svals.end(), s.begin(), s.end());
  }
  std::sort(result.svals.begin(), result.svals.end());
  return result;
}

SpectrumResult oracle_spectrum_for_weight(const Weight& w, double h,
                                          int k_max) {
  const TorusGrid& g = w.phi.grid;
  double xvar = 0.0;
  for (int k = 0; k < g.ny; ++k)
    for (int j = 1; j < g.nx; ++j)
      xvar = std::max(xvar, std::abs(w.phi.at(j, k) - w.phi.at(0, k)));
  require(xvar <= 1e-12 * std::max(1.0, max_abs(w.phi)),
          "oracle needs a y-only weight; x-variance = " + std::to_string(xvar));
  std::vector<double> phi_y(g.ny);
  for (int k = 0; k < g.ny; ++k) phi_y[k] = w.phi.at(0, k);
  if (k_max <= 0)
    k_max = oracle_required_k_max(derivative_1d(phi_y), h);
  return oracle_spectrum(phi_y, h, k_max);
}

Obstacle1d oracle_obstacle_1d(const std::vector<double>& phi_y, double tau,
                              double tol, int max_iter) {
  const int n = static_cast<int>(phi_y.size());
  require(n >= 8 && n % 2 == 0, "phi_y needs an even sample count >= 8");
  double osc = *std::max_element(phi_y.begin(), phi_y.end()) -
               *std::min_element(phi_y.begin(), phi_y.end());
  require(tau > 0.0 && tau <= osc * (1.0 + 1e-12),
          "tau must lie in (0, oscillation]");

  std::vector<double> lo(phi_y);
  for (double& v : lo) v -= tau;
  const std::vector<double>& hi = phi_y;
  std::vector<double> psi(lo);

  const double omega = 2.0 / (1.0 + std::sin(kTwoPi / (2.0 * n)));
  auto residual = [&]() {
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
      double gs = 0.5 * (psi[(i + n - 1) % n] + psi[(i + 1) % n]);
      r = std::max(r, std::abs(std::clamp(gs, lo[i], hi[i]) - psi[i]));
    }
    return r;
  };

  Obstacle1d out;
  out.tau = tau;
  int sweeps = 0;
  double r = residual();
  while (r > tol) {
    require(sweeps < max_iter, "1-D oracle solver did not converge");
    for (int s = 0; s < 16 && sweeps < max_iter; ++s, ++sweeps) {
      for (int i = 0; i < n; ++i) {
        double gs = 0.5 * (psi[(i + n - 1) % n] + psi[(i + 1) % n]);
        psi[i] = std::clamp(psi[i] + omega * (gs - psi[i]), lo[i], hi[i]);
      }
    }
    r = residual();
  }
  out.iterations = sweeps;
  out.residual = r;
  out.psi = std::move(psi);
  return out;
}

ScalarField lift_1d(const std::vector<double>& psi_y, const TorusGrid& grid) {
  require(static_cast<int>(psi_y.size()) == grid.ny,
          "lift_1d: sample count must equal grid.ny");
  ScalarField out(grid);
  for (int k = 0; k < grid.ny; ++k)
    for (int j = 0; j < grid.nx; ++j) out.at(j, k) = psi_y[k];
  return out;
}

}  // namespace dbarlab
