#include <cmath>

#include "dbarlab/contact.hpp"
#include "doctest.h"
#include "siny_exact.hpp"

using namespace dbarlab;

namespace {

Weight siny(int n) { return weight_from_catalog("siny", {}, make_grid(n, n)); }

ObstacleSolution tight_solve(const Weight& w, double tau) {
  PsorOptions opt;
  opt.tol = 1e-10;
  return solve_psor(w, tau, opt);
}

double binding_delta() { return 1e-9; }

}  // namespace

TEST_CASE("critical-case masks are sublevel sets of sin y") {
  Weight w = siny(64);
  PsorOptions opt;
  opt.tol = 1e-12;
  ObstacleSolution sol = solve_psor(w, 2.0, opt);
  double delta = 0.05;
  ContactSets cs = extract_contact_sets(sol, w, delta);
  const TorusGrid& g = w.phi.grid;
  for (int k = 0; k < g.ny; ++k) {
    double s = std::sin(g.y(k));
    // psi = -1: upper contact where sin y <= -1 + delta (+ solver slack),
    // lower contact where sin y >= 1 - delta.
    bool expect_plus = s + 1.0 <= delta + 1e-9;
    bool expect_minus = 1.0 - s <= delta + 1e-9;
    for (int j = 0; j < g.nx; ++j) {
      CHECK(cs.m_plus[g.index(j, k)] == (expect_plus ? 1 : 0));
      CHECK(cs.m_minus[g.index(j, k)] == (expect_minus ? 1 : 0));
    }
  }
}

TEST_CASE("box collapse: small tau leaves almost no band") {
  Weight w = siny(64);
  ObstacleSolution sol = tight_solve(w, 0.02);
  ContactSets cs = extract_contact_sets(sol, w, 0.02 / 4.0);
  int band = 0;
  for (size_t i = 0; i < cs.band.size(); ++i) {
    band += cs.band[i];
    CHECK(cs.m_plus[i] + cs.m_minus[i] + cs.band[i] == 1);  // partition
  }
  CHECK(band < static_cast<int>(0.25 * cs.band.size()));
}

TEST_CASE("contact bands match the analytic intervals within one cell") {
  Weight w = siny(64);
  ObstacleSolution sol = tight_solve(w, 0.5);
  ContactSets cs = extract_contact_sets(sol, w, binding_delta());
  const TorusGrid& g = w.phi.grid;
  double a = siny_exact::alpha_of_tau(0.5);
  double c_plus = 1.5 * siny_exact::kPi;
  double c_minus = 0.5 * siny_exact::kPi;
  for (int k = 0; k < g.ny; ++k) {
    double y = g.y(k);
    double d_plus = std::abs(std::remainder(y - c_plus, kTwoPi));
    double d_minus = std::abs(std::remainder(y - c_minus, kTwoPi));
    bool inside_plus = d_plus <= a - g.dy;
    bool outside_plus = d_plus >= a + g.dy;
    if (inside_plus) CHECK(cs.m_plus[g.index(0, k)] == 1);
    if (outside_plus) CHECK(cs.m_plus[g.index(0, k)] == 0);
    bool inside_minus = d_minus <= a - g.dy;
    bool outside_minus = d_minus >= a + g.dy;
    if (inside_minus) CHECK(cs.m_minus[g.index(0, k)] == 1);
    if (outside_minus) CHECK(cs.m_minus[g.index(0, k)] == 0);
  }
}

TEST_CASE("contact volumes approach the analytic values") {
  Weight w = siny(64);

  // tau -> 0: V_plus approaches Vol(M_plus) = 4 pi.
  ObstacleSolution sol = tight_solve(w, 0.05);
  ContactSets cs = extract_contact_sets(sol, w, binding_delta());
  auto [vp, vm] = contact_volumes(cs, w);
  CHECK(vp == doctest::Approx(siny_exact::v_plus(0.05)).epsilon(0.02));
  CHECK(vm == doctest::Approx(-siny_exact::v_plus(0.05)).epsilon(0.02));

  ObstacleSolution sol2 = tight_solve(w, 0.5);
  ContactSets cs2 = extract_contact_sets(sol2, w, binding_delta());
  auto [vp2, vm2] = contact_volumes(cs2, w);
  CHECK(vp2 == doctest::Approx(siny_exact::v_plus(0.5)).epsilon(0.02));
}

TEST_CASE("empty masks integrate to zero") {
  Weight w = siny(16);
  ContactSets cs;
  cs.grid = w.phi.grid;
  cs.m_plus.assign(cs.grid.size(), 0);
  cs.m_minus.assign(cs.grid.size(), 0);
  cs.band.assign(cs.grid.size(), 1);
  auto [vp, vm] = contact_volumes(cs, w);
  CHECK(vp == 0.0);
  CHECK(vm == 0.0);
}

TEST_CASE("balance identity for converged solutions") {
  Weight ws = siny(64);
  Weight wb = weight_from_catalog("bump", {}, make_grid(64, 64));
  struct Case {
    const Weight* w;
    double tau;
  };
  std::vector<Case> cases;
  for (double tau : {0.3, 0.5, 1.0, 1.9}) cases.push_back({&ws, tau});
  for (double frac : {0.3, 0.6}) cases.push_back({&wb, frac * wb.osc});
  for (const auto& c : cases) {
    CAPTURE(c.tau);
    ObstacleSolution sol = tight_solve(*c.w, c.tau);
    ContactSets cs = extract_contact_sets(sol, *c.w, binding_delta());
    auto [vp, vm] = contact_volumes(cs, *c.w);
    double bound =
        cs.fb_cell_count * cs.grid.cell_area() * max_abs(c.w->lap_phi) + 1e-8;
    CHECK(std::abs(vp + vm) <= bound);
  }
}

TEST_CASE("structure report passes for converged siny solves") {
  Weight w = siny(64);
  for (double tau : {0.5, 1.9}) {
    CAPTURE(tau);
    ObstacleSolution sol = tight_solve(w, tau);
    ContactSets cs = extract_contact_sets(sol, w, binding_delta());
    StructureReport rep = assert_structure(cs, w);
    CHECK(rep.sign_ok);
    CHECK(rep.separation_ok);
    CHECK(rep.volume_ok);
    CHECK(rep.plus_margin > 0.0);
    CHECK(rep.minus_margin > 0.0);
  }
}

TEST_CASE("structure test of the test: sloppy masks fail the sign condition") {
  Weight w = siny(64);
  PsorOptions sloppy;
  sloppy.tol = 0.1;  // stop the solver while psi is still far from converged
  ObstacleSolution sol = solve_psor(w, 0.5, sloppy);
  ContactSets cs = extract_contact_sets(sol, w, 0.2);
  StructureReport rep = assert_structure(cs, w);
  CHECK_FALSE(rep.separation_ok);
}

TEST_CASE("oversized delta is rejected") {
  Weight w = siny(32);
  ObstacleSolution sol = tight_solve(w, 0.5);
  CHECK_THROWS_WITH_AS(extract_contact_sets(sol, w, 0.3),
                       doctest::Contains("overlap"), Error);
  CHECK_THROWS_AS(extract_contact_sets(sol, w, 1e-12), Error);  // below slack
}

TEST_CASE("free-boundary area shrinks roughly linearly under refinement") {
  double prev_area = -1.0;
  for (int n : {32, 64, 128}) {
    Weight w = siny(n);
    ObstacleSolution sol = tight_solve(w, 0.5);
    ContactSets cs = extract_contact_sets(sol, w, binding_delta());
    double area = cs.fb_area();
    if (prev_area > 0.0) CHECK(area <= 0.75 * prev_area);
    prev_area = area;
  }
}
