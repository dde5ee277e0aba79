#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "dbarlab/spectral.hpp"

namespace dbarlab {

/// Weight phi on the torus with cached spectral derivatives. Non-constant by
/// contract (osc > 0); mean(lap_phi) vanishes identically for the spectral
/// Laplacian.
struct Weight {
  ScalarField phi;
  ScalarField lap_phi;
  ComplexField dbar_phi;  // (phi_x + i phi_y)/2
  double osc = 0.0;
};

/// Builds the caches and validates the non-constancy contract.
Weight make_weight(ScalarField phi);

/// Catalog names: "siny" (phi = sin y), "bump" (phi solves lap phi = periodized
/// Gaussian minus mean; params sigma, amplitude, center_x, center_y),
/// "custom-poisson" (phi = poisson_solve(source)).
Weight weight_from_catalog(const std::string& name,
                           const std::map<std::string, double>& params,
                           const TorusGrid& grid,
                           const std::optional<ScalarField>& source = {});

double oscillation(const Weight& w);

/// integrate(lap_phi restricted to {lap_phi > 0}).
double positive_region_volume(const Weight& w);

/// One closed polyline of the zero curve of lap_phi. Points live in [0,2pi)^2;
/// consecutive points may wrap around the torus, so segment lengths use
/// minimum-image deltas. dn_lap[i] = |grad lap_phi| at pts[i], positive by the
/// transversality contract. seg_length[i] spans pts[i] -> pts[i+1 mod n].
struct CurveComponent {
  std::vector<std::array<double, 2>> pts;
  std::vector<double> dn_lap;
  std::vector<double> seg_length;

  double arclength() const {
    double s = 0.0;
    for (double v : seg_length) s += v;
    return s;
  }
};

struct CurveSample {
  std::vector<CurveComponent> components;

  double total_arclength() const {
    double s = 0.0;
    for (const auto& c : components) s += c.arclength();
    return s;
  }
};

/// Marching-squares contour of lap_phi = 0 with linear interpolation;
/// dn_lap evaluated from the spectral gradient of lap_phi. Errors when the
/// field has no sign change or when min dn_lap along the curve falls below
/// floor_rel * max|grad lap_phi| (transversality floor).
CurveSample extract_zero_curve(const Weight& w, double floor_rel = 1e-3);

/// Sum over segments of (dn_lap at midpoint)^{1/3} * arclength, all
/// components.
double curve_integral_third_power(const CurveSample& c);

}  // namespace dbarlab
