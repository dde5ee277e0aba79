#include "dbarlab/op.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace dbarlab {

namespace {

// Column of the spectral dbar matrix for the indicator at node 0; every
// other column is a periodic translate.
std::vector<cdouble> dbar_kernel(const TorusGrid& g) {
  ComplexField delta(g);
  delta.values[0] = 1.0;
  return dbar_apply(delta).values;
}

OperatorMatrix assemble_impl(const TorusGrid& g, double h,
                             const ComplexField* dbar_phi) {
  require(h > 0.0, "semiclassical parameter h must be positive");
  OperatorMatrix m;
  m.h = h;
  m.grid = g;
  m.dim = g.size();
  const int nx = g.nx, ny = g.ny, dim = m.dim;
  m.entries.assign(static_cast<size_t>(dim) * dim, cdouble{});

  const std::vector<cdouble> kern = dbar_kernel(g);
  for (int k0 = 0; k0 < ny; ++k0) {
    for (int j0 = 0; j0 < nx; ++j0) {
      const int col = g.index(j0, k0);
      cdouble* out = m.entries.data() + static_cast<size_t>(col) * dim;
      for (int k = 0; k < ny; ++k) {
        const int ks = k - k0 < 0 ? k - k0 + ny : k - k0;
        const cdouble* krow = kern.data() + static_cast<size_t>(ks) * nx;
        cdouble* orow = out + static_cast<size_t>(k) * nx;
        for (int j = 0; j < nx; ++j) {
          const int js = j - j0 < 0 ? j - j0 + nx : j - j0;
          orow[j] = h * krow[js];
        }
      }
      if (dbar_phi != nullptr)
        out[col] += dbar_phi->values[static_cast<size_t>(col)];
    }
  }
  return m;
}

void check_dense_cap(int dim, int cap) {
  require(dim <= cap,
          "dense cap exceeded: operator dimension " + std::to_string(dim) +
              " > " + std::to_string(cap) +
              " (shrink the grid or raise spectrum.dense_cap)");
}

}  // namespace

OperatorMatrix assemble(const Weight& w, double h) {
  return assemble_impl(w.phi.grid, h, &w.dbar_phi);
}

OperatorMatrix assemble_dbar_only(const TorusGrid& grid, double h) {
  return assemble_impl(grid, h, nullptr);
}

DenseSvd dense_svd(const OperatorMatrix& m, bool with_vectors, int dense_cap) {
  check_dense_cap(m.dim, dense_cap);
  const int n = m.dim;
  std::vector<cdouble> a(m.entries);  // zgesdd destroys its input
  DenseSvd out;
  out.dim = n;
  std::vector<double> s(n);
  int info;
  if (with_vectors) {
    // jobz='O' overwrites a with U, which we do not need; only VT is kept.
    std::vector<cdouble> vt(static_cast<size_t>(n) * n);
    info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'O', n, n,
                          reinterpret_cast<lapack_complex_double*>(a.data()),
                          n, s.data(), nullptr, n,
                          reinterpret_cast<lapack_complex_double*>(vt.data()),
                          n);
    require(info == 0, "zgesdd failed with info " + std::to_string(info));
    out.right_vectors.resize(static_cast<size_t>(n) * n);
    // Ascending order: vector idx is conj of VT row (n-1-idx).
    for (int idx = 0; idx < n; ++idx) {
      const int row = n - 1 - idx;
      cdouble* dst = out.right_vectors.data() + static_cast<size_t>(idx) * n;
      for (int i = 0; i < n; ++i)
        dst[i] = std::conj(vt[static_cast<size_t>(i) * n + row]);
    }
  } else {
    info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', n, n,
                          reinterpret_cast<lapack_complex_double*>(a.data()),
                          n, s.data(), nullptr, n, nullptr, n);
    require(info == 0, "zgesdd failed with info " + std::to_string(info));
  }
  out.svals.assign(s.rbegin(), s.rend());
  return out;
}

SpectrumResult singular_values(const OperatorMatrix& m, int dense_cap) {
  DenseSvd svd = dense_svd(m, /*with_vectors=*/false, dense_cap);
  SpectrumResult r;
  r.h = m.h;
  r.svals = std::move(svd.svals);
  return r;
}

int count_below(SpectrumResult& s, double threshold) {
  require(threshold >= 0.0, "threshold must be nonnegative");
  const double scale = s.svals.empty() ? 0.0 : s.svals.back();
  const double floor = kPrecisionFloorRel * scale;
  if (threshold < 10.0 * floor)
    s.flags.push_back("threshold " + std::to_string(threshold) +
                      " within 10x of the double-precision floor " +
                      std::to_string(floor) +
                      "; increase h or use smaller tau");
  int count = 0;
  double nearest = std::numeric_limits<double>::infinity();
  for (double v : s.svals) {
    if (v <= threshold) ++count;
    nearest = std::min(nearest, std::abs(v - threshold));
  }
  if (threshold > 0.0 && nearest <= 1e-3 * threshold)
    s.flags.push_back("threshold " + std::to_string(threshold) +
                      " within relative gap 1e-3 of a singular value");
  s.n_below[threshold] = count;
  return count;
}

ComplexField singular_state(const OperatorMatrix& m, int index) {
  require(index >= 0 && index < m.dim, "singular state index out of range");
  DenseSvd svd = dense_svd(m, /*with_vectors=*/true);
  ComplexField state(m.grid);
  const cdouble* v = svd.vector(index);
  std::copy(v, v + m.dim, state.values.begin());
  return state;
}

}  // namespace dbarlab
