#include "dbarlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace dbarlab {

namespace {

// FFTW planning is not thread-safe; executing a cached plan on fresh arrays
// is. Plans are created once per grid size under a lock and reused.
class FftCache {
 public:
  static FftCache& instance() {
    static FftCache cache;
    return cache;
  }

  struct Plans {
    fftw_plan fwd;
    fftw_plan bwd;
  };

  const Plans& get(int nx, int ny) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(nx, ny);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<cdouble> scratch_in(static_cast<size_t>(nx) * ny);
    std::vector<cdouble> scratch_out(scratch_in.size());
    auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
    auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
    Plans p;
    // Row-major (ny, nx): x is the fastest-varying index.
    p.fwd = fftw_plan_dft_2d(ny, nx, in, out, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_2d(ny, nx, in, out, FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    require(p.fwd && p.bwd, "fftw plan creation failed");
    return plans_.emplace(key, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, Plans> plans_;
};

inline int freq(int j, int n) { return j <= n / 2 - 1 ? j : j - n; }

// Frequency for real first derivatives: Nyquist odd contribution zeroed.
inline int freq_deriv(int j, int n) { return j == n / 2 ? 0 : freq(j, n); }

std::vector<cdouble> to_complex(const ScalarField& f) {
  std::vector<cdouble> out(f.values.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = f.values[i];
  return out;
}

// Applies a Fourier multiplier m(k,l) in place of the field's spectrum.
template <class M>
std::vector<cdouble> apply_multiplier(const TorusGrid& g,
                                      const std::vector<cdouble>& values,
                                      M&& m) {
  std::vector<cdouble> hat(values.size());
  fft2_forward(g, values.data(), hat.data());
  for (int k = 0; k < g.ny; ++k) {
    for (int j = 0; j < g.nx; ++j) {
      hat[g.index(j, k)] *= m(freq(j, g.nx), freq(k, g.ny), j, k);
    }
  }
  std::vector<cdouble> out(values.size());
  fft2_backward(g, hat.data(), out.data());
  const double scale = 1.0 / g.size();
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace

void fft2_forward(const TorusGrid& g, const cdouble* in, cdouble* out) {
  const auto& plans = FftCache::instance().get(g.nx, g.ny);
  fftw_execute_dft(plans.fwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void fft2_backward(const TorusGrid& g, const cdouble* in, cdouble* out) {
  const auto& plans = FftCache::instance().get(g.nx, g.ny);
  fftw_execute_dft(plans.bwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

ScalarField laplacian(const ScalarField& f) {
  auto out = apply_multiplier(
      f.grid, to_complex(f), [](int k, int l, int, int) -> cdouble {
        return -static_cast<double>(k) * k - static_cast<double>(l) * l;
      });
  ScalarField result(f.grid);
  for (size_t i = 0; i < out.size(); ++i) result.values[i] = out[i].real();
  return result;
}

ComplexField dbar_apply(const ComplexField& f) {
  ComplexField result(f.grid);
  result.values = apply_multiplier(
      f.grid, f.values, [](int k, int l, int, int) -> cdouble {
        return {-0.5 * l, 0.5 * k};
      });
  return result;
}

ComplexField dbar_conjugate_apply(const ComplexField& f) {
  ComplexField result(f.grid);
  result.values = apply_multiplier(
      f.grid, f.values, [](int k, int l, int, int) -> cdouble {
        return {-0.5 * l, -0.5 * k};
      });
  return result;
}

ScalarField poisson_solve(const ScalarField& g, double rel_tol) {
  const double m = mean(g);
  require(std::abs(m) <= rel_tol * std::max(max_abs(g), 1e-300) ||
              max_abs(g) == 0.0,
          "nonzero mean: Poisson problem not solvable on torus (mean(g) = " +
              std::to_string(m) + ")");
  auto out = apply_multiplier(g.grid, to_complex(g),
                              [](int k, int l, int, int) -> cdouble {
                                double k2 = static_cast<double>(k) * k +
                                            static_cast<double>(l) * l;
                                return k2 == 0.0 ? 0.0 : -1.0 / k2;
                              });
  ScalarField result(g.grid);
  for (size_t i = 0; i < out.size(); ++i) result.values[i] = out[i].real();
  return result;
}

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.cell_area();
}

std::pair<ScalarField, ScalarField> gradient(const ScalarField& f) {
  const TorusGrid& g = f.grid;
  auto values = to_complex(f);
  std::vector<cdouble> hat(values.size());
  fft2_forward(g, values.data(), hat.data());
  std::vector<cdouble> hx(hat.size()), hy(hat.size());
  for (int k = 0; k < g.ny; ++k) {
    for (int j = 0; j < g.nx; ++j) {
      int i = g.index(j, k);
      double kx = freq_deriv(j, g.nx);
      double ly = freq_deriv(k, g.ny);
      hx[i] = hat[i] * cdouble(0.0, kx);
      hy[i] = hat[i] * cdouble(0.0, ly);
    }
  }
  ScalarField fx(g), fy(g);
  std::vector<cdouble> tmp(hat.size());
  const double scale = 1.0 / g.size();
  fft2_backward(g, hx.data(), tmp.data());
  for (size_t i = 0; i < tmp.size(); ++i) fx.values[i] = tmp[i].real() * scale;
  fft2_backward(g, hy.data(), tmp.data());
  for (size_t i = 0; i < tmp.size(); ++i) fy.values[i] = tmp[i].real() * scale;
  return {std::move(fx), std::move(fy)};
}

ComplexField dbar_of_real(const ScalarField& f) {
  auto [fx, fy] = gradient(f);
  ComplexField out(f.grid);
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = cdouble(0.5 * fx.values[i], 0.5 * fy.values[i]);
  return out;
}

std::vector<cdouble> i_dy_matrix_1d(int n) {
  require(n >= 2 && n % 2 == 0, "i_dy_matrix_1d: n must be even");
  // Circulant with symbol -l: entry (r,c) = (1/n) sum_l (-l) e^{il(r-c)dy}.
  std::vector<cdouble> first(n, 0.0);
  const double dy = kTwoPi / n;
  for (int d = 0; d < n; ++d) {
    cdouble s = 0.0;
    for (int jl = 0; jl < n; ++jl) {
      int l = freq(jl, n);
      double phase = l * d * dy;
      s += cdouble(std::cos(phase), std::sin(phase)) *
           static_cast<double>(-l);
    }
    first[d] = s / static_cast<double>(n);
  }
  std::vector<cdouble> m(static_cast<size_t>(n) * n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      m[static_cast<size_t>(c) * n + r] = first[(r - c + n) % n];
  return m;
}

std::vector<double> derivative_1d(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  require(n >= 2 && n % 2 == 0, "derivative_1d: n must be even");
  std::vector<cdouble> hat(n, 0.0);
  const double dy = kTwoPi / n;
  for (int jl = 0; jl < n; ++jl) {
    cdouble s = 0.0;
    for (int r = 0; r < n; ++r) {
      double phase = -freq(jl, n) * r * dy;
      s += f[r] * cdouble(std::cos(phase), std::sin(phase));
    }
    hat[jl] = s / static_cast<double>(n);
  }
  std::vector<double> out(n, 0.0);
  for (int r = 0; r < n; ++r) {
    cdouble s = 0.0;
    for (int jl = 0; jl < n; ++jl) {
      int l = freq_deriv(jl, n);
      double phase = freq(jl, n) * r * dy;
      s += hat[jl] * cdouble(0.0, l) * cdouble(std::cos(phase), std::sin(phase));
    }
    out[r] = s.real();
  }
  return out;
}

}  // namespace dbarlab
