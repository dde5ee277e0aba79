#include <cmath>

#include "dbarlab/obstacle.hpp"
#include "dbarlab/oracle.hpp"
#include "doctest.h"
#include "siny_exact.hpp"

using namespace dbarlab;

namespace {

Weight siny64() {
  static Weight w = weight_from_catalog("siny", {}, make_grid(64, 64));
  return w;
}

ScalarField exact_siny_solution(const TorusGrid& g, double tau) {
  return sample(g,
                [&](double, double y) { return siny_exact::psi(y, tau); });
}

}  // namespace

TEST_CASE("PSOR critical case tau = osc gives the constant min phi") {
  Weight w = siny64();
  PsorOptions opt;
  opt.tol = 1e-12;
  ObstacleSolution sol = solve_psor(w, 2.0, opt);
  ScalarField expect(w.phi.grid, -1.0);
  CHECK(sup_distance(sol.psi, expect) <= 10.0 * opt.tol);
  // The constant is harmonic; the spectral Laplacian of the leftover solver
  // error is amplified by up to (n/2)^2.
  auto rep = complementarity_residual(sol.psi, w, 2.0,
                                      default_contact_delta(w, opt.tol));
  CHECK(rep.max_violation() <= 1e-6);
  CHECK(rep.band_residual <= 1e-6);
}

TEST_CASE("PSOR box collapse: tiny tau returns phi itself") {
  Weight w = siny64();
  ObstacleSolution sol = solve_psor(w, 1e-8);
  CHECK(sup_distance(sol.psi, w.phi) <= 1.01e-8);
}

TEST_CASE("PSOR matches the 1-D solve at matched resolution") {
  Weight w = siny64();
  ObstacleSolution sol = solve_psor(w, 0.5);
  // y-only weight: the 2-D 5-point solve restricted to one column equals the
  // 1-D 3-point solve on the same ny points.
  std::vector<double> phi_y(w.phi.grid.ny);
  for (int k = 0; k < w.phi.grid.ny; ++k) phi_y[k] = w.phi.at(0, k);
  Obstacle1d o = oracle_obstacle_1d(phi_y, 0.5);
  ScalarField lifted = lift_1d(o.psi, w.phi.grid);
  CHECK(sup_distance(sol.psi, lifted) <= 1e-4);

  // The solution is y-only.
  double xvar = 0.0;
  for (int k = 0; k < w.phi.grid.ny; ++k)
    for (int j = 1; j < w.phi.grid.nx; ++j)
      xvar = std::max(xvar, std::abs(sol.psi.at(j, k) - sol.psi.at(0, k)));
  CHECK(xvar <= 1e-8);
}

TEST_CASE("PSOR converges to the tangent-line construction") {
  Weight w = siny64();
  ObstacleSolution sol = solve_psor(w, 0.5);
  ScalarField expect = exact_siny_solution(w.phi.grid, 0.5);
  // Discretization gap of the 5-point scheme at 64x64.
  CHECK(sup_distance(sol.psi, expect) <= 5e-3);
}

TEST_CASE("PSOR rejects the non-uniqueness regime") {
  Weight w = siny64();
  CHECK_THROWS_WITH_AS(solve_psor(w, 2.5),
                       doctest::Contains("non-uniqueness"), Error);
  CHECK_THROWS_AS(solve_psor(w, 0.0), Error);
  PsorOptions bad;
  bad.omega = 2.0;
  CHECK_THROWS_AS(solve_psor(w, 0.5, bad), Error);
}

TEST_CASE("PSOR max_iter error carries the residual") {
  Weight w = siny64();
  PsorOptions opt;
  opt.max_iter = 3;
  CHECK_THROWS_WITH_AS(solve_psor(w, 0.5, opt),
                       doctest::Contains("did not converge"), Error);
}

TEST_CASE("monotone dependence on tau (regression guard)") {
  Weight w = weight_from_catalog("siny", {}, make_grid(32, 32));
  PsorOptions opt;
  ObstacleSolution a = solve_psor(w, 0.4, opt);
  ObstacleSolution b = solve_psor(w, 0.8, opt);
  ObstacleSolution c = solve_psor(w, 1.5, opt);
  for (size_t i = 0; i < a.psi.values.size(); ++i) {
    CHECK(b.psi.values[i] <= a.psi.values[i] + 100 * opt.tol);
    CHECK(c.psi.values[i] <= b.psi.values[i] + 100 * opt.tol);
  }
}

TEST_CASE("penalized solve agrees with PSOR") {
  Weight w = siny64();
  ObstacleSolution ref = solve_psor(w, 0.5);
  PenaltyParams pp;  // schedule {0.2, 0.1, 0.05, 0.02}
  ObstacleSolution pen = solve_penalized(w, 0.5, pp);
  double bound = std::max(1e-3, 10.0 * 0.02 * max_abs(w.lap_phi));
  CHECK(sup_distance(pen.psi, ref.psi) <= bound);
  CHECK(pen.penalty.has_value());
}

TEST_CASE("penalized critical case") {
  Weight w = siny64();
  ObstacleSolution pen = solve_penalized(w, 2.0);
  ScalarField expect(w.phi.grid, -1.0);
  CHECK(sup_distance(pen.psi, expect) <=
        10.0 * 0.02 * std::max(1.0, max_abs(w.lap_phi)));
}

TEST_CASE("penalized mean mode stays bracketed") {
  Weight w = siny64();
  ObstacleSolution pen = solve_penalized(w, 0.5);
  REQUIRE(pen.penalty.has_value());
  const auto& d = *pen.penalty;
  CHECK(d.phi_minus_0 - 1e-9 <= d.mean_mode_min);
  CHECK(d.mean_mode_max <= d.phi_plus_0 + 1e-9);
  // (u | psi0) of the returned solution sits in [phi_minus_0, phi_plus_0].
  double u0 = kTwoPi * mean(pen.psi);
  CHECK(u0 >= d.phi_minus_0 - 1e-9);
  CHECK(u0 <= d.phi_plus_0 + 1e-9);
}

TEST_CASE("penalized schedule validation") {
  Weight w = siny64();
  PenaltyParams pp;
  pp.schedule = {0.05, 0.1};  // not decreasing
  CHECK_THROWS_AS(solve_penalized(w, 0.5, pp), Error);
  pp.schedule = {0.9};  // violates 2 eps (1-eps) < sqrt(area) tau at tiny tau
  CHECK_THROWS_WITH_AS(solve_penalized(w, 0.02, pp),
                       doctest::Contains("schedule invalid"), Error);
}

TEST_CASE("complementarity negative control: phi itself is not a solution") {
  Weight w = siny64();
  double delta = default_contact_delta(w, 1e-10);
  auto rep = complementarity_residual(w.phi, w, 0.5, delta);
  // On {psi > lo + delta} = everything, failure of lap psi >= 0 equals
  // max(-lap phi, 0) = max(sin y) = 1.
  CHECK(rep.sub_violation == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.box_violation == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("complementarity residual of a converged solve is small") {
  Weight w = siny64();
  ObstacleSolution sol = solve_psor(w, 0.5);
  double dx = w.phi.grid.dx;
  double delta = 5.0 * dx * dx * max_abs(w.lap_phi);
  auto rep = complementarity_residual(sol.psi, w, 0.5, delta);
  CHECK(rep.box_violation <= 1e-12);
  // The spectral Laplacian of a C^{1,1} function rings near the free
  // boundary (the jump there is ~0.6 for this tau); measured ceiling 0.15.
  CHECK(rep.sub_violation <= 0.25);
  CHECK(rep.super_violation <= 0.25);
  // Both stay well below the negative control (1.0 for psi = phi).
  CHECK(rep.sub_violation < 0.5);
}

TEST_CASE("second-difference proxy stays bounded under refinement") {
  auto proxy = [](int n) {
    Weight w = weight_from_catalog("siny", {}, make_grid(n, n));
    ObstacleSolution sol = solve_psor(w, 0.5);
    const TorusGrid& g = w.phi.grid;
    double worst = 0.0;
    for (int k = 0; k < g.ny; ++k) {
      for (int j = 0; j < g.nx; ++j) {
        double c = sol.psi.at(j, k);
        double xx = (sol.psi.at((j + 1) % g.nx, k) - 2 * c +
                     sol.psi.at((j + g.nx - 1) % g.nx, k)) /
                    (g.dx * g.dx);
        double yy = (sol.psi.at(j, (k + 1) % g.ny) - 2 * c +
                     sol.psi.at(j, (k + g.ny - 1) % g.ny)) /
                    (g.dy * g.dy);
        worst = std::max({worst, std::abs(xx), std::abs(yy)});
      }
    }
    return worst;
  };
  double p32 = proxy(32), p64 = proxy(64), p128 = proxy(128);
  CHECK(p64 <= 1.2 * p32);
  CHECK(p128 <= 1.2 * p64);
}
