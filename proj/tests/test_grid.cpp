#include <cmath>
#include <random>

#include "dbarlab/spectral.hpp"
#include "doctest.h"

using namespace dbarlab;

namespace {

// Random real trigonometric polynomial resolved by the grid (modes strictly
// below Nyquist).
ScalarField random_trig_poly(const TorusGrid& g, uint64_t seed, int kmax) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  struct Mode {
    int k, l;
    double a, b;
  };
  std::vector<Mode> modes;
  for (int t = 0; t < 6; ++t) {
    std::uniform_int_distribution<int> pick(-kmax, kmax);
    modes.push_back({pick(rng), pick(rng), amp(rng), amp(rng)});
  }
  return sample(g, [&](double x, double y) {
    double v = 0.0;
    for (const auto& m : modes)
      v += m.a * std::cos(m.k * x + m.l * y) + m.b * std::sin(m.k * x + m.l * y);
    return v;
  });
}

}  // namespace

TEST_CASE("make_grid spacings and rejections") {
  TorusGrid g = make_grid(8, 8);
  CHECK(g.dx == doctest::Approx(kTwoPi / 8).epsilon(1e-15));
  CHECK(g.dy == doctest::Approx(kTwoPi / 8).epsilon(1e-15));

  TorusGrid g2 = make_grid(32, 64);
  CHECK(g2.dx == doctest::Approx(kTwoPi / 32).epsilon(1e-15));
  CHECK(g2.dy == doctest::Approx(kTwoPi / 64).epsilon(1e-15));
  CHECK(g2.dx * g2.nx == doctest::Approx(kTwoPi).epsilon(1e-15));
  CHECK(g2.dy * g2.ny == doctest::Approx(kTwoPi).epsilon(1e-15));

  CHECK_THROWS_WITH_AS(make_grid(7, 8), doctest::Contains("odd dimension"),
                       Error);
  CHECK_THROWS_AS(make_grid(8, 6), Error);
}

TEST_CASE("laplacian eigenfunctions") {
  TorusGrid g = make_grid(32, 32);

  ScalarField cosy = sample(g, [](double, double y) { return std::cos(y); });
  ScalarField lap = laplacian(cosy);
  for (size_t i = 0; i < lap.values.size(); ++i)
    CHECK(lap.values[i] ==
          doctest::Approx(-cosy.values[i]).epsilon(1e-12).scale(1.0));

  ScalarField c(g, 3.25);
  CHECK(max_abs(laplacian(c)) < 1e-12);

  // sin(2x)cos(3y): multiplier -(4+9)
  ScalarField f = sample(
      g, [](double x, double y) { return std::sin(2 * x) * std::cos(3 * y); });
  ScalarField lf = laplacian(f);
  for (size_t i = 0; i < lf.values.size(); ++i)
    CHECK(lf.values[i] ==
          doctest::Approx(-13.0 * f.values[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("dbar_apply on modes") {
  TorusGrid g = make_grid(16, 16);

  auto eix =
      sample_complex(g, [](double x, double) { return std::polar(1.0, x); });
  auto out = dbar_apply(eix);
  for (size_t i = 0; i < out.values.size(); ++i)
    CHECK(std::abs(out.values[i] - cdouble(0, 0.5) * eix.values[i]) < 1e-13);

  auto eiy =
      sample_complex(g, [](double, double y) { return std::polar(1.0, y); });
  out = dbar_apply(eiy);
  for (size_t i = 0; i < out.values.size(); ++i)
    CHECK(std::abs(out.values[i] - cdouble(-0.5, 0) * eiy.values[i]) < 1e-13);

  // sin y -> (i/2) cos y
  auto siny = sample_complex(g, [](double, double y) { return std::sin(y); });
  out = dbar_apply(siny);
  for (int k = 0; k < g.ny; ++k)
    for (int j = 0; j < g.nx; ++j)
      CHECK(std::abs(out.at(j, k) - cdouble(0, 0.5 * std::cos(g.y(k)))) <
            1e-13);
}

TEST_CASE("poisson_solve analytic and error paths") {
  TorusGrid g = make_grid(32, 32);

  ScalarField rhs = sample(g, [](double, double y) { return -std::sin(y); });
  ScalarField f = poisson_solve(rhs);
  for (int k = 0; k < g.ny; ++k)
    for (int j = 0; j < g.nx; ++j)
      CHECK(f.at(j, k) ==
            doctest::Approx(std::sin(g.y(k))).epsilon(1e-12).scale(1.0));

  ScalarField zero(g);
  CHECK(max_abs(poisson_solve(zero)) == 0.0);

  ScalarField one(g, 1.0);
  CHECK_THROWS_WITH_AS(poisson_solve(one), doctest::Contains("nonzero mean"),
                       Error);
}

TEST_CASE("integrate basics") {
  TorusGrid g = make_grid(32, 16);
  ScalarField one(g, 1.0);
  CHECK(integrate(one) == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-14));

  ScalarField siny = sample(g, [](double, double y) { return std::sin(y); });
  CHECK(std::abs(integrate(siny)) < 1e-12);

  ScalarField sin2 = sample(g, [](double, double y) {
    double s = std::sin(y);
    return s * s;
  });
  CHECK(integrate(sin2) ==
        doctest::Approx(kTwoPi * kTwoPi / 2.0).epsilon(1e-13));
}

TEST_CASE("spectral multipliers act diagonally on resolved modes") {
  TorusGrid g = make_grid(16, 16);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(-7, 7);
  for (int trial = 0; trial < 20; ++trial) {
    int k = pick(rng), l = pick(rng);
    auto mode = sample_complex(
        g, [&](double x, double y) { return std::polar(1.0, k * x + l * y); });
    cdouble m_dbar = cdouble(-0.5 * l, 0.5 * k);
    auto d = dbar_apply(mode);
    for (size_t i = 0; i < mode.values.size(); ++i)
      CHECK(std::abs(d.values[i] - m_dbar * mode.values[i]) <=
            1e-12 * (std::abs(m_dbar) + 1.0));
  }
}

TEST_CASE("discrete Stokes: laplacian integrates to zero") {
  TorusGrid g = make_grid(32, 32);
  for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    ScalarField f = random_trig_poly(g, seed, 9);
    double norm = std::max(max_abs(f), 1e-30);
    CHECK(std::abs(integrate(laplacian(f))) <= 1e-10 * norm);
  }
}

TEST_CASE("poisson_solve inverts laplacian on mean-zero fields") {
  TorusGrid g = make_grid(32, 32);
  for (uint64_t seed : {7u, 8u, 9u}) {
    ScalarField f = random_trig_poly(g, seed, 9);
    double m = mean(f);
    for (double& v : f.values) v -= m;
    ScalarField back = poisson_solve(laplacian(f));
    CHECK(sup_distance(back, f) <= 1e-10 * std::max(max_abs(f), 1.0));
  }
}

TEST_CASE("4 dbar* dbar = -laplacian on resolved modes") {
  TorusGrid g = make_grid(16, 16);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> pick(-7, 7);
  for (int trial = 0; trial < 10; ++trial) {
    int k = pick(rng), l = pick(rng);
    auto mode = sample_complex(
        g, [&](double x, double y) { return std::polar(1.0, k * x + l * y); });
    auto composed = dbar_conjugate_apply(dbar_apply(mode));
    double k2 = double(k) * k + double(l) * l;
    for (size_t i = 0; i < mode.values.size(); ++i)
      CHECK(std::abs(4.0 * composed.values[i] - k2 * mode.values[i]) <=
            1e-11 * (k2 + 1.0));
  }
}

TEST_CASE("gradient matches analytic derivatives") {
  TorusGrid g = make_grid(32, 32);
  ScalarField f =
      sample(g, [](double x, double y) { return std::sin(2 * x + y); });
  auto [fx, fy] = gradient(f);
  for (int k = 0; k < g.ny; ++k) {
    for (int j = 0; j < g.nx; ++j) {
      double c = std::cos(2 * g.x(j) + g.y(k));
      CHECK(fx.at(j, k) == doctest::Approx(2 * c).epsilon(1e-11).scale(1.0));
      CHECK(fy.at(j, k) == doctest::Approx(c).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("bilinear interpolation reproduces node values and wraps") {
  TorusGrid g = make_grid(16, 16);
  ScalarField f = random_trig_poly(g, 99, 3);
  CHECK(interp_bilinear(f, g.x(3), g.y(5)) ==
        doctest::Approx(f.at(3, 5)).epsilon(1e-14));
  double v = interp_bilinear(f, kTwoPi - 0.5 * g.dx, 0.0);
  CHECK(v == doctest::Approx(0.5 * (f.at(15, 0) + f.at(0, 0))).epsilon(1e-13));
}
