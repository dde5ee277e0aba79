#pragma once

#include <utility>

#include "dbarlab/grid.hpp"

namespace dbarlab {

/// Spectral (DFT) calculus on the torus grid. All derivative operators are
/// exact Fourier multipliers on resolved modes.
///
/// Nyquist convention: operators acting on complex fields (dbar_apply,
/// dbar_conjugate_apply) keep the face-value multiplier at k = -n/2; real
/// first derivatives (gradient, dbar_of_real) zero the odd Nyquist
/// contribution so that derivatives of real input stay real. The Laplacian
/// multiplier -(k^2+l^2) is even and needs no special case.

/// Fourier multiplier -(k^2+l^2).
ScalarField laplacian(const ScalarField& f);

/// d/dzbar = (d/dx + i d/dy)/2; multiplier (ik - l)/2 on e^{i(kx+ly)}.
ComplexField dbar_apply(const ComplexField& f);

/// L^2 adjoint of dbar_apply; multiplier (-ik - l)/2.
ComplexField dbar_conjugate_apply(const ComplexField& f);

/// Zero-mean f with laplacian(f) = g - mean(g). Rejects g whose mean exceeds
/// rel_tol * max|g| ("not solvable on torus").
ScalarField poisson_solve(const ScalarField& g, double rel_tol = 1e-10);

/// dx*dy*sum(values); exact for trigonometric polynomials the grid resolves.
double integrate(const ScalarField& f);

/// Spectral (df/dx, df/dy) of a real field; Nyquist odd part zeroed.
std::pair<ScalarField, ScalarField> gradient(const ScalarField& f);

/// (f_x + i f_y)/2 of a real field, via gradient().
ComplexField dbar_of_real(const ScalarField& f);

/// Dense matrix of the 1-D operator i*d/dy on n periodic points (Fourier
/// multiplier -l, Nyquist at face value). Hermitian; column-major n*n.
std::vector<cdouble> i_dy_matrix_1d(int n);

/// Spectral derivative of real 1-D periodic samples (Nyquist odd part
/// zeroed).
std::vector<double> derivative_1d(const std::vector<double>& f);

/// Forward/backward 2-D DFT used by the operator assembly (backward is
/// unnormalized).
void fft2_forward(const TorusGrid& g, const cdouble* in, cdouble* out);
void fft2_backward(const TorusGrid& g, const cdouble* in, cdouble* out);

}  // namespace dbarlab
