#include <cmath>

#include "dbarlab/weight.hpp"
#include "doctest.h"

using namespace dbarlab;

TEST_CASE("siny catalog weight") {
  TorusGrid g = make_grid(64, 64);
  Weight w = weight_from_catalog("siny", {}, g);
  CHECK(oscillation(w) == doctest::Approx(2.0).epsilon(1e-12));
  for (int k = 0; k < g.ny; ++k)
    for (int j = 0; j < g.nx; ++j)
      CHECK(w.lap_phi.at(j, k) ==
            doctest::Approx(-std::sin(g.y(k))).epsilon(1e-12).scale(1.0));
  // dbar phi = (i/2) cos y
  for (int k = 0; k < g.ny; ++k) {
    CHECK(std::abs(w.dbar_phi.at(3, k) -
                   cdouble(0.0, 0.5 * std::cos(g.y(k)))) < 1e-12);
  }
}

TEST_CASE("custom-poisson reproduces siny") {
  TorusGrid g = make_grid(32, 32);
  ScalarField src = sample(g, [](double, double y) { return -std::sin(y); });
  Weight w = weight_from_catalog("custom-poisson", {}, g, src);
  ScalarField expect = sample(g, [](double, double y) { return std::sin(y); });
  CHECK(sup_distance(w.phi, expect) < 1e-12);
}

TEST_CASE("constant weight rejected") {
  TorusGrid g = make_grid(16, 16);
  CHECK_THROWS_WITH_AS(make_weight(ScalarField(g, 0.0)),
                       doctest::Contains("non-constant"), Error);
}

TEST_CASE("unknown catalog name and parameters rejected") {
  TorusGrid g = make_grid(16, 16);
  CHECK_THROWS_WITH_AS(weight_from_catalog("nope", {}, g),
                       doctest::Contains("unknown weight"), Error);
  CHECK_THROWS_WITH_AS(weight_from_catalog("bump", {{"width", 1.0}}, g),
                       doctest::Contains("unknown weight parameter"), Error);
}

TEST_CASE("weight caches are mutually consistent") {
  TorusGrid g = make_grid(64, 64);
  for (const char* name : {"siny", "bump"}) {
    Weight w = weight_from_catalog(name, {}, g);
    CHECK(std::abs(integrate(w.lap_phi)) <= 1e-10 * max_abs(w.lap_phi));
    ScalarField lap = laplacian(w.phi);
    CHECK(sup_distance(lap, w.lap_phi) <=
          1e-10 * std::max(1.0, max_abs(w.lap_phi)));
    ComplexField db = dbar_of_real(w.phi);
    double worst = 0.0;
    for (size_t i = 0; i < db.values.size(); ++i)
      worst = std::max(worst, std::abs(db.values[i] - w.dbar_phi.values[i]));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("positive_region_volume for siny is 4 pi") {
  TorusGrid g = make_grid(64, 64);
  Weight w = weight_from_catalog("siny", {}, g);
  double v = positive_region_volume(w);
  CHECK(v == doctest::Approx(2.0 * kTwoPi).epsilon(2e-3));
}

TEST_CASE("balance of signed Laplacian volumes") {
  TorusGrid g = make_grid(64, 64);
  for (const char* name : {"siny", "bump"}) {
    Weight w = weight_from_catalog(name, {}, g);
    double pos = 0.0, neg = 0.0, abs_sum = 0.0;
    for (double v : w.lap_phi.values) {
      if (v > 0) pos += v;
      if (v < 0) neg += v;
      abs_sum += std::abs(v);
    }
    CHECK(std::abs(pos + neg) <= 1e-8 * abs_sum);
    double vp = positive_region_volume(w);
    CHECK(vp == doctest::Approx(-neg * g.cell_area()).epsilon(1e-10));
  }
}

TEST_CASE("zero curve of siny: two circles with unit normal derivative") {
  TorusGrid g = make_grid(64, 64);
  Weight w = weight_from_catalog("siny", {}, g);
  CurveSample c = extract_zero_curve(w);
  REQUIRE(c.components.size() == 2);
  for (const auto& comp : c.components) {
    CHECK(comp.arclength() == doctest::Approx(kTwoPi).epsilon(5e-3));
    for (double dn : comp.dn_lap)
      CHECK(dn == doctest::Approx(1.0).epsilon(5e-3));
    // Each component is a horizontal circle at y = 0 or y = pi.
    double y0 = comp.pts.front()[1];
    CHECK((std::abs(std::remainder(y0, kTwoPi)) < 1e-9 ||
           std::abs(y0 - kTwoPi / 2.0) < 1e-9));
  }
  CHECK(curve_integral_third_power(c) ==
        doctest::Approx(2.0 * kTwoPi).epsilon(5e-3));
}

TEST_CASE("bump weight has one connected zero curve") {
  TorusGrid g = make_grid(64, 64);
  Weight w =
      weight_from_catalog("bump", {{"sigma", 0.8}, {"amplitude", 1.0}}, g);
  CurveSample c = extract_zero_curve(w);
  CHECK(c.components.size() == 1);
  CHECK(c.components.front().arclength() > 1.0);
}

TEST_CASE("curve integral is stable under refinement") {
  Weight w64 = weight_from_catalog("bump", {}, make_grid(64, 64));
  Weight w128 = weight_from_catalog("bump", {}, make_grid(128, 128));
  double i64 = curve_integral_third_power(extract_zero_curve(w64));
  double i128 = curve_integral_third_power(extract_zero_curve(w128));
  CHECK(i128 == doctest::Approx(i64).epsilon(0.01));
}

TEST_CASE("constant-coefficient curve integral") {
  // One circle of length 2 pi with dn_lap = 8 everywhere: 8^(1/3) = 2.
  CurveComponent comp;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    double t = kTwoPi * i / n;
    comp.pts.push_back({kTwoPi / 2 + std::cos(t), kTwoPi / 2 + std::sin(t)});
    comp.dn_lap.push_back(8.0);
  }
  comp.seg_length.assign(n, kTwoPi / n);
  CurveSample c;
  c.components.push_back(comp);
  CHECK(curve_integral_third_power(c) ==
        doctest::Approx(2.0 * kTwoPi).epsilon(1e-12));
}

TEST_CASE("one-signed field has no zero curve") {
  TorusGrid g = make_grid(16, 16);
  Weight fake;
  fake.phi = sample(g, [](double, double y) { return std::sin(y); });
  fake.osc = 2.0;
  fake.dbar_phi = ComplexField(g);
  fake.lap_phi = ScalarField(g, 1.0);  // inconsistent on purpose
  CHECK_THROWS_WITH_AS(extract_zero_curve(fake),
                       doctest::Contains("no sign change"), Error);
}

TEST_CASE("degenerate crossing fails the transversality floor") {
  TorusGrid g = make_grid(64, 64);
  Weight fake;
  fake.phi = sample(g, [](double, double y) { return std::sin(y); });
  fake.osc = 2.0;
  fake.dbar_phi = ComplexField(g);
  // (sin y)^3 crosses zero with vanishing gradient at the crossing.
  fake.lap_phi = sample(g, [](double, double y) {
    double s = std::sin(y);
    return s * s * s;
  });
  CHECK_THROWS_WITH_AS(extract_zero_curve(fake),
                       doctest::Contains("transversality"), Error);
}
