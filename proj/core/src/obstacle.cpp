#include "dbarlab/obstacle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace dbarlab {

const char* to_string(ObstacleMethod m) {
  return m == ObstacleMethod::psor ? "psor" : "penalized";
}

double ComplementarityReport::max_violation() const {
  return std::max({box_violation, sub_violation, super_violation});
}

double default_contact_delta(const Weight& w, double solver_tol) {
  const double dx = w.phi.grid.dx;
  return std::max(10.0 * solver_tol, 5.0 * dx * dx * max_abs(w.lap_phi));
}

namespace {

void check_tau(const Weight& w, double tau) {
  require(tau > 0.0, "tau must be positive");
  require(tau <= w.osc * (1.0 + 1e-12),
          "non-uniqueness regime: tau = " + std::to_string(tau) +
              " exceeds the weight oscillation " + std::to_string(w.osc) +
              " (use the large-tau check instead)");
}

}  // namespace

ObstacleSolution solve_psor(const Weight& w, double tau,
                            const PsorOptions& opt) {
  check_tau(w, tau);
  require(opt.omega > 0.0 && opt.omega < 2.0, "PSOR omega must be in (0,2)");
  const auto t_start = std::chrono::steady_clock::now();

  const TorusGrid& g = w.phi.grid;
  const int nx = g.nx, ny = g.ny;
  const double wx = 1.0 / (g.dx * g.dx);
  const double wy = 1.0 / (g.dy * g.dy);
  const double diag = 2.0 * (wx + wy);

  std::vector<double> lo(w.phi.values);
  for (double& v : lo) v -= tau;
  const std::vector<double>& hi = w.phi.values;

  ScalarField psi(g);
  psi.values = lo;

  auto gs_value = [&](const std::vector<double>& u, int j, int k) {
    int jl = j == 0 ? nx - 1 : j - 1;
    int jr = j == nx - 1 ? 0 : j + 1;
    int kd = k == 0 ? ny - 1 : k - 1;
    int ku = k == ny - 1 ? 0 : k + 1;
    return (wx * (u[g.index(jl, k)] + u[g.index(jr, k)]) +
            wy * (u[g.index(j, kd)] + u[g.index(j, ku)])) /
           diag;
  };

  auto projected_residual = [&]() {
    double r = 0.0;
    for (int k = 0; k < ny; ++k) {
      for (int j = 0; j < nx; ++j) {
        int i = g.index(j, k);
        double target = std::clamp(gs_value(psi.values, j, k), lo[i], hi[i]);
        r = std::max(r, std::abs(target - psi.values[i]));
      }
    }
    return r;
  };

  // The fixed-point residual alone under-certifies the distance to the
  // discrete solution by the SOR contraction factor, so termination also
  // requires the geometric-extrapolation error estimate r * rho/(1 - rho)
  // to clear the tolerance.
  int sweeps = 0;
  double residual = projected_residual();
  double prev_residual = std::numeric_limits<double>::infinity();
  double err_estimate = std::numeric_limits<double>::infinity();
  int plateau = 0;
  while (!(residual <= opt.tol &&
           (err_estimate <= opt.tol || plateau >= 3))) {
    require(sweeps < opt.max_iter,
            "PSOR did not converge in " + std::to_string(opt.max_iter) +
                " sweeps (last projected residual " + std::to_string(residual) +
                ")");
    int burst = std::min(opt.check_every, opt.max_iter - sweeps);
    for (int s = 0; s < burst; ++s) {
      for (int k = 0; k < ny; ++k) {
        for (int j = 0; j < nx; ++j) {
          int i = g.index(j, k);
          double gs = gs_value(psi.values, j, k);
          double cand = psi.values[i] + opt.omega * (gs - psi.values[i]);
          psi.values[i] = std::clamp(cand, lo[i], hi[i]);
        }
      }
    }
    sweeps += burst;
    prev_residual = residual;
    residual = projected_residual();
    if (residual <= 0.0) {
      err_estimate = 0.0;
    } else if (residual < prev_residual) {
      plateau = 0;
      double per_sweep = std::pow(residual / prev_residual, 1.0 / burst);
      err_estimate = residual * per_sweep / (1.0 - per_sweep);
    } else {
      // Rounding floor: the residual stopped decreasing.
      ++plateau;
      err_estimate = std::numeric_limits<double>::infinity();
    }
  }

  ObstacleSolution sol;
  sol.tau = tau;
  sol.method = ObstacleMethod::psor;
  sol.iterations = sweeps;
  sol.box_tol = opt.tol;
  sol.psi = std::move(psi);
  sol.residual =
      complementarity_residual(sol.psi, w, tau,
                               default_contact_delta(w, opt.tol))
          .max_violation();
  sol.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return sol;
}

namespace {

// Lipschitz Heaviside ramp: 1 for t >= 0, 0 below -eps.
double heaviside_ramp(double t, double eps) {
  if (t >= 0.0) return 1.0;
  if (t < -eps) return 0.0;
  return 1.0 + t / eps;
}

// Strictly decreasing piecewise-affine penalty tying the mean mode to
// [phi_minus_0, phi_plus_0]: value +-C0 at the interval ends, +-C0*eps at the
// interior knots phi_minus_0 + eps(1-eps) and phi_plus_0 - eps(1-eps), slope
// -C0 outside the interval.
struct MeanModePenalty {
  double lo, hi;  // phi_minus_0, phi_plus_0
  double c0, eps;

  std::array<double, 4> knots_t() const {
    return {lo, lo + eps * (1.0 - eps), hi - eps * (1.0 - eps), hi};
  }
  std::array<double, 4> knots_v() const {
    return {c0, c0 * eps, -c0 * eps, -c0};
  }

  double eval(double t) const {
    auto kt = knots_t();
    auto kv = knots_v();
    if (t < kt[0]) return kv[0] - c0 * (t - kt[0]);
    for (int s = 0; s + 1 < 4; ++s) {
      if (t <= kt[s + 1]) {
        double u = (t - kt[s]) / (kt[s + 1] - kt[s]);
        return kv[s] + u * (kv[s + 1] - kv[s]);
      }
    }
    return kv[3] - c0 * (t - kt[3]);
  }

  double inverse(double v) const {
    auto kt = knots_t();
    auto kv = knots_v();
    if (v > kv[0]) return kt[0] - (v - kv[0]) / c0;
    for (int s = 0; s + 1 < 4; ++s) {
      if (v >= kv[s + 1]) {
        double u = (v - kv[s]) / (kv[s + 1] - kv[s]);
        return kt[s] + u * (kt[s + 1] - kt[s]);
      }
    }
    return kt[3] - (v - kv[3]) / c0;
  }
};

}  // namespace

ObstacleSolution solve_penalized(const Weight& w, double tau,
                                 const PenaltyParams& pp) {
  check_tau(w, tau);
  require(pp.damping > 0.0 && pp.damping <= 1.0, "damping must be in (0,1]");
  require(!pp.schedule.empty(), "penalty schedule is empty");
  for (size_t i = 0; i + 1 < pp.schedule.size(); ++i)
    require(pp.schedule[i] > pp.schedule[i + 1],
            "penalty schedule must be strictly decreasing");
  const auto t_start = std::chrono::steady_clock::now();

  const TorusGrid& g = w.phi.grid;
  const double area_sqrt = kTwoPi;  // sqrt(4 pi^2)
  const double psi0 = 1.0 / area_sqrt;

  const std::vector<double>& hi = w.phi.values;
  std::vector<double> lo(hi);
  for (double& v : lo) v -= tau;

  const double phi_plus_0 = area_sqrt * mean(w.phi);
  const double phi_minus_0 = phi_plus_0 - area_sqrt * tau;
  const double c0 = pp.c0 > 0.0 ? pp.c0 : 2.0 * max_abs(w.lap_phi);

  // Laplacian signs split once; both obstacles share lap phi.
  std::vector<double> lap_neg(w.lap_phi.values.size());
  std::vector<double> lap_pos(w.lap_phi.values.size());
  for (size_t i = 0; i < lap_neg.size(); ++i) {
    lap_neg[i] = std::max(-w.lap_phi.values[i], 0.0);
    lap_pos[i] = std::max(w.lap_phi.values[i], 0.0);
  }

  // The interior knots must stay inside [phi_minus_0, phi_plus_0].
  std::vector<double> schedule;
  for (double eps : pp.schedule)
    if (2.0 * eps * (1.0 - eps) < phi_plus_0 - phi_minus_0)
      schedule.push_back(eps);
  require(!schedule.empty(),
          "penalty schedule invalid: every epsilon violates 2*eps*(1-eps) < "
          "sqrt(area)*tau; use smaller epsilons for this tau");

  ScalarField v(g);
  for (size_t i = 0; i < v.values.size(); ++i)
    v.values[i] = 0.5 * (lo[i] + hi[i]);
  double v_plus = area_sqrt * mean(v);

  ScalarField u(g);
  double u_minus = v_plus;
  double mean_mode_min = v_plus, mean_mode_max = v_plus;
  int total_iters = 0;

  ScalarField f(g);
  for (size_t stage = 0; stage < schedule.size(); ++stage) {
    const double eps = schedule[stage];
    MeanModePenalty gpen{phi_minus_0, phi_plus_0, c0, eps};

    // The Picard map stiffens as epsilon shrinks (ramp slope 1/eps), so the
    // damping adapts: halve on residual growth, creep back up on steady
    // decrease. Deterministic given the inputs.
    double damping = pp.damping;
    double prev_residual = std::numeric_limits<double>::infinity();
    int decrease_streak = 0;
    double best = std::numeric_limits<double>::infinity();
    int best_age = 0;
    for (int iter = 0;; ++iter) {
      require(iter < pp.max_iter,
              "penalized solve: Picard iteration hit max_iter at epsilon = " +
                  std::to_string(eps));
      for (size_t i = 0; i < f.values.size(); ++i) {
        double t = v.values[i];
        f.values[i] = lap_neg[i] * heaviside_ramp(lo[i] - t, eps) -
                      lap_pos[i] * heaviside_ramp(t - hi[i], eps);
      }
      // Q f: zero-mean solution of -lap (Qf) = f - mean(f).
      const double f_mean = mean(f);
      ScalarField minus_f(g);
      for (size_t i = 0; i < f.values.size(); ++i)
        minus_f.values[i] = f_mean - f.values[i];
      ScalarField qf = poisson_solve(minus_f);
      u_minus = gpen.inverse(-f_mean);
      double residual = std::abs(u_minus - v_plus);
      for (size_t i = 0; i < u.values.size(); ++i) {
        u.values[i] = v_plus * psi0 + qf.values[i];
        residual = std::max(residual, std::abs(u.values[i] - v.values[i]));
      }
      mean_mode_min = std::min({mean_mode_min, v_plus, u_minus});
      mean_mode_max = std::max({mean_mode_max, v_plus, u_minus});
      ++total_iters;
      if (residual <= pp.tol) break;
      if (residual > prev_residual) {
        damping = std::max(damping * 0.5, 1.0 / 4096.0);
        decrease_streak = 0;
      } else if (++decrease_streak >= 50) {
        damping = std::min(damping * 1.25, pp.damping);
        decrease_streak = 0;
      }
      prev_residual = residual;
      if (residual < best * (1.0 - 1e-5)) {
        best = residual;
        best_age = 0;
      } else if (++best_age > 5000) {
        throw Error(
            "penalized solve stagnated at residual " + std::to_string(residual) +
            " (epsilon = " + std::to_string(eps) +
            "); try smaller damping or a larger final epsilon");
      }
      for (size_t i = 0; i < v.values.size(); ++i)
        v.values[i] += damping * (u.values[i] - v.values[i]);
      v_plus += damping * (u_minus - v_plus);
    }
    // Warm start the next stage from the fixed point.
    v = u;
    v_plus = u_minus;
  }

  ObstacleSolution sol;
  sol.tau = tau;
  sol.method = ObstacleMethod::penalized;
  sol.iterations = total_iters;
  sol.psi = std::move(u);
  PenaltyDiagnostics diag;
  diag.phi_minus_0 = phi_minus_0;
  diag.phi_plus_0 = phi_plus_0;
  diag.mean_mode_min = mean_mode_min;
  diag.mean_mode_max = mean_mode_max;
  diag.final_epsilon = schedule.back();
  diag.stages = static_cast<int>(schedule.size());
  sol.penalty = diag;

  double box = 0.0;
  for (size_t i = 0; i < sol.psi.values.size(); ++i) {
    box = std::max(box, lo[i] - sol.psi.values[i]);
    box = std::max(box, sol.psi.values[i] - hi[i]);
  }
  sol.box_tol = std::max(box, pp.tol);
  sol.residual =
      complementarity_residual(sol.psi, w, tau,
                               default_contact_delta(w, sol.box_tol))
          .max_violation();
  sol.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return sol;
}

ComplementarityReport complementarity_residual(const ScalarField& psi,
                                               const Weight& w, double tau,
                                               double delta) {
  require(delta > 0.0, "contact margin delta must be positive");
  require(psi.grid == w.phi.grid, "psi grid mismatch");
  ScalarField lap_psi = laplacian(psi);

  ComplementarityReport rep;
  rep.delta = delta;
  for (size_t i = 0; i < psi.values.size(); ++i) {
    double lo = w.phi.values[i] - tau;
    double hi = w.phi.values[i];
    double p = psi.values[i];
    rep.box_violation =
        std::max({rep.box_violation, lo - p, p - hi});
    bool off_lower = p - lo > delta;
    bool off_upper = hi - p > delta;
    double lap = lap_psi.values[i];
    if (off_lower) rep.sub_violation = std::max(rep.sub_violation, -lap);
    if (off_upper) rep.super_violation = std::max(rep.super_violation, lap);
    if (off_lower && off_upper)
      rep.band_residual = std::max(rep.band_residual, std::abs(lap));
  }
  rep.box_violation = std::max(rep.box_violation, 0.0);
  rep.sub_violation = std::max(rep.sub_violation, 0.0);
  rep.super_violation = std::max(rep.super_violation, 0.0);
  return rep;
}

}  // namespace dbarlab
