#pragma once

#include <map>
#include <optional>

#include "dbarlab/weight.hpp"

namespace dbarlab {

/// Dense node-basis matrix of P = h*dbar + (dbar phi). With the uniform
/// quadrature weight the plain l2 singular values equal the L2 ones.
struct OperatorMatrix {
  double h = 0.0;
  int dim = 0;
  TorusGrid grid;
  std::vector<cdouble> entries;  // column-major dim x dim
};

/// Columns are the images of node indicators; the dbar part is the
/// translation-invariant spectral kernel, the weight enters as a diagonal.
OperatorMatrix assemble(const Weight& w, double h);

/// P = h*dbar alone (flat weight), for analytic-spectrum checks.
OperatorMatrix assemble_dbar_only(const TorusGrid& grid, double h);

inline constexpr int kDenseCapDefault = 4096;
inline constexpr double kTauOverHMax = 25.0;       // e^-25 sits above the
inline constexpr double kPrecisionFloorRel = 1e-12;  // double-SVD noise floor

struct SpectrumResult {
  double h = 0.0;
  std::optional<double> tau_ref;
  std::vector<double> svals;  // ascending
  std::map<double, int> n_below;
  std::vector<std::string> flags;
};

/// Full dense SVD (values only); refuses dim > dense_cap.
SpectrumResult singular_values(const OperatorMatrix& m,
                               int dense_cap = kDenseCapDefault);

/// Count of singular values <= threshold (multiplicity included). Flags the
/// result when the threshold dips near the double-precision floor or lies
/// within relative gap 1e-3 of a singular value.
int count_below(SpectrumResult& s, double threshold);

/// Right singular vectors ascending by singular value, column-major.
struct DenseSvd {
  int dim = 0;
  std::vector<double> svals;            // ascending
  std::vector<cdouble> right_vectors;   // empty unless requested

  const cdouble* vector(int idx) const {
    return right_vectors.data() + static_cast<size_t>(idx) * dim;
  }
};

DenseSvd dense_svd(const OperatorMatrix& m, bool with_vectors,
                   int dense_cap = kDenseCapDefault);

/// index-th singular state (ascending), reshaped to the grid, unit l2 norm.
ComplexField singular_state(const OperatorMatrix& m, int index);

}  // namespace dbarlab
