#pragma once

#include "dbarlab/op.hpp"

namespace dbarlab {

/// Independent separation-of-variables computation for y-only weights
/// phi = phi(y): for u = e^{ikx} w(y), P u = e^{ikx} M_k w with
/// M_k = (h/2) (i d/dy) + (i/2) diag(h k + phi'(y)), so the 2-D spectrum is
/// the merge of the 1-D mode spectra. Modes with |h k| well above max|phi'|
/// only contribute singular values >= (|h k| - max|phi'|)/2, which bounds the
/// k range needed below any working threshold.

/// Dense matrix of M_k on ny periodic points (same spectral derivative
/// convention as the 2-D assembly).
std::vector<cdouble> mode_operator(const std::vector<double>& dphi_y, double h,
                                   int k);

/// Smallest admissible k_max for thresholds below max|phi'|/2.
int oracle_required_k_max(const std::vector<double>& dphi_y, double h);

/// Merged sorted singular values of all modes |k| <= k_max. Errors when
/// k_max is below the required bound (the message carries the bound).
SpectrumResult oracle_spectrum(const std::vector<double>& phi_y, double h,
                               int k_max);

/// Convenience wrapper: verifies the weight is y-only (x-variance below
/// 1e-12 relative), extracts phi(y), picks k_max automatically when <= 0.
SpectrumResult oracle_spectrum_for_weight(const Weight& w, double h,
                                          int k_max = 0);

struct Obstacle1d {
  std::vector<double> psi;
  double tau = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

/// Projected Gauss-Seidel on the 1-D periodic 3-point Laplacian with box
/// [phi - tau, phi]. In 1-D the off-contact segments are affine, which the
/// tests assert post hoc.
Obstacle1d oracle_obstacle_1d(const std::vector<double>& phi_y, double tau,
                              double tol = 1e-12, int max_iter = 2000000);

/// Lifts a 1-D solution on ny points to the 2-D grid (constant in x).
ScalarField lift_1d(const std::vector<double>& psi_y, const TorusGrid& grid);

}  // namespace dbarlab
