#pragma once

#include <optional>

#include "dbarlab/weight.hpp"

namespace dbarlab {

enum class ObstacleMethod { psor, penalized };

const char* to_string(ObstacleMethod m);

/// Diagnostics of the penalized solve: the mean-mode iterate (u|psi0) must
/// stay inside [phi_minus_0, phi_plus_0] at every accepted iterate.
struct PenaltyDiagnostics {
  double phi_minus_0 = 0.0;
  double phi_plus_0 = 0.0;
  double mean_mode_min = 0.0;
  double mean_mode_max = 0.0;
  double final_epsilon = 0.0;
  int stages = 0;
};

/// Solution of the double obstacle problem phi - tau <= psi <= phi with
/// lap psi >= 0 off the lower obstacle and lap psi <= 0 off the upper one.
struct ObstacleSolution {
  ScalarField psi;
  double tau = 0.0;
  ObstacleMethod method = ObstacleMethod::psor;
  int iterations = 0;
  double residual = 0.0;  // final complementarity residual (spectral)
  double box_tol = 0.0;   // guaranteed box slack of this solve
  double wall_time = 0.0;
  std::optional<PenaltyDiagnostics> penalty;
};

struct PsorOptions {
  double omega = 1.8;
  double tol = 1e-10;
  int max_iter = 200000;
  int check_every = 8;  // sweeps between residual evaluations
};

/// Projected SOR on the 5-point FD Laplacian with per-node clipping to
/// [phi - tau, phi]. Terminates when the projected Gauss-Seidel residual
/// (sup distance between psi and its one-step projected update) <= tol.
/// Contact nodes end exactly on the obstacle values.
ObstacleSolution solve_psor(const Weight& w, double tau,
                            const PsorOptions& opt = {});

struct PenaltyParams {
  std::vector<double> schedule{0.2, 0.1, 0.05, 0.02};  // strictly decreasing
  double epsilon = 0.02;   // final penalty scale; overridden by schedule.back()
  double c0 = 0.0;         // 0 = derive 2*max(|lap phi|) from the weight
  double damping = 0.5;    // initial Picard damping in (0,1]; adapts downward
  double tol = 1e-7;       // fixed-point residual target per stage
  int max_iter = 100000;   // Picard iterations per stage
};

/// Penalization solve: for each epsilon in the schedule, damped Picard
/// iteration of (v, v+) -> (v+ psi0 + Q f_eps(v,.), g_eps^{-1}(-mean
/// f_eps(v,.))) where Q inverts -lap on mean-zero fields and psi0 is the
/// normalized constant. Stages warm-start from the previous epsilon.
ObstacleSolution solve_penalized(const Weight& w, double tau,
                                 const PenaltyParams& pp = {});

/// Node-wise violations of the three obstacle-problem conditions, measured
/// with the spectral Laplacian. Since psi is only C^{1,1}, the spectral
/// Laplacian rings near the free boundary; sub/super violations are taken
/// only on nodes whose value gap to the relevant obstacle exceeds delta.
struct ComplementarityReport {
  double box_violation = 0.0;    // max(phi - tau - psi, psi - phi, 0)
  double sub_violation = 0.0;    // failure of lap psi >= 0 on {psi > lo + delta}
  double super_violation = 0.0;  // failure of lap psi <= 0 on {psi < hi - delta}
  double band_residual = 0.0;    // max |lap psi| strictly between both margins
  double delta = 0.0;

  double max_violation() const;
};

ComplementarityReport complementarity_residual(const ScalarField& psi,
                                               const Weight& w, double tau,
                                               double delta);

/// Default contact-detection margin: max(10 * solver tol,
/// 5 * dx^2 * max|lap phi|).
double default_contact_delta(const Weight& w, double solver_tol);

}  // namespace dbarlab
