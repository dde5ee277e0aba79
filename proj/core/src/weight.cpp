#include "dbarlab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace dbarlab {

Weight make_weight(ScalarField phi) {
  require(all_finite(phi), "weight contains non-finite values");
  Weight w;
  w.osc = max_value(phi) - min_value(phi);
  require(w.osc > 0.0, "weight must be non-constant (oscillation = 0)");
  w.lap_phi = laplacian(phi);
  w.dbar_phi = dbar_of_real(phi);
  w.phi = std::move(phi);
  return w;
}

namespace {

double periodized_gaussian(double u, double v, double sigma) {
  // Minimum-image offsets plus nearest neighbors; farther images are below
  // double precision for sigma <= O(1).
  u = std::remainder(u, kTwoPi);
  v = std::remainder(v, kTwoPi);
  double s = 0.0;
  for (int m = -1; m <= 1; ++m) {
    for (int n = -1; n <= 1; ++n) {
      double du = u + kTwoPi * m;
      double dv = v + kTwoPi * n;
      s += std::exp(-(du * du + dv * dv) / (2.0 * sigma * sigma));
    }
  }
  return s;
}

double param_or(const std::map<std::string, double>& params,
                const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

Weight weight_from_catalog(const std::string& name,
                           const std::map<std::string, double>& params,
                           const TorusGrid& grid,
                           const std::optional<ScalarField>& source) {
  static const std::vector<std::string> known_keys = {
      "sigma", "amplitude", "center_x", "center_y"};
  for (const auto& [key, value] : params) {
    (void)value;
    require(std::find(known_keys.begin(), known_keys.end(), key) !=
                known_keys.end(),
            "unknown weight parameter '" + key + "'");
  }

  if (name == "siny") {
    return make_weight(sample(grid, [](double, double y) { return std::sin(y); }));
  }
  if (name == "bump") {
    const double sigma = param_or(params, "sigma", 0.8);
    const double amplitude = param_or(params, "amplitude", 1.0);
    const double x0 = param_or(params, "center_x", kTwoPi / 2.0);
    const double y0 = param_or(params, "center_y", kTwoPi / 2.0);
    require(sigma > 0.0, "bump sigma must be positive");
    require(amplitude != 0.0, "bump amplitude must be nonzero");
    ScalarField src = sample(grid, [&](double x, double y) {
      return periodized_gaussian(x - x0, y - y0, sigma);
    });
    const double m = mean(src);
    for (double& v : src.values) v = amplitude * (v - m);
    return make_weight(poisson_solve(src));
  }
  if (name == "custom-poisson") {
    require(source.has_value(), "custom-poisson needs a source field");
    require(source->grid == grid, "custom-poisson source grid mismatch");
    return make_weight(poisson_solve(*source));
  }
  throw Error("unknown weight '" + name +
              "' (catalog: siny, bump, custom-poisson)");
}

double oscillation(const Weight& w) { return w.osc; }

double positive_region_volume(const Weight& w) {
  ScalarField clipped(w.lap_phi.grid);
  for (size_t i = 0; i < clipped.values.size(); ++i) {
    double v = w.lap_phi.values[i];
    clipped.values[i] = v > 0.0 ? v : 0.0;
  }
  return integrate(clipped);
}

namespace {

// Marching squares over the periodic grid. Edge ids identify the canonical
// node pair so both adjacent cells agree on the crossing point.
struct CurveExtractor {
  const TorusGrid& g;
  const ScalarField& f;
  const ScalarField& gx;
  const ScalarField& gy;

  // edge id: type * nx * ny + k * nx + j; type 0 = horizontal
  // ((j,k)->(j+1,k)), type 1 = vertical ((j,k)->(j,k+1)).
  int edge_id(int type, int j, int k) const {
    return type * g.size() + ((k % g.ny + g.ny) % g.ny) * g.nx +
           ((j % g.nx + g.nx) % g.nx);
  }

  bool positive(int j, int k) const {
    return f.at((j % g.nx + g.nx) % g.nx, (k % g.ny + g.ny) % g.ny) > 0.0;
  }

  double value(int j, int k) const {
    return f.at((j % g.nx + g.nx) % g.nx, (k % g.ny + g.ny) % g.ny);
  }

  std::array<double, 2> crossing_point(int type, int j, int k) const {
    double fa = value(j, k);
    double fb = type == 0 ? value(j + 1, k) : value(j, k + 1);
    double t = fa / (fa - fb);
    t = std::clamp(t, 0.0, 1.0);
    double x = g.x(j) + (type == 0 ? t * g.dx : 0.0);
    double y = g.y(k) + (type == 1 ? t * g.dy : 0.0);
    if (x >= kTwoPi) x -= kTwoPi;
    if (y >= kTwoPi) y -= kTwoPi;
    return {x, y};
  }

  CurveSample run() const {
    // Per crossing edge, the two partner edges (one per adjacent cell).
    std::unordered_map<int, std::array<int, 2>> links;
    std::unordered_map<int, int> degree;
    auto add_segment = [&](int ea, int eb) {
      for (auto [from, to] : {std::pair{ea, eb}, std::pair{eb, ea}}) {
        auto& d = degree[from];
        require(d < 2, "zero curve stitching failed (degenerate cell)");
        links[from][d++] = to;
      }
    };

    for (int k = 0; k < g.ny; ++k) {
      for (int j = 0; j < g.nx; ++j) {
        bool b0 = positive(j, k);
        bool b1 = positive(j + 1, k);
        bool b2 = positive(j + 1, k + 1);
        bool b3 = positive(j, k + 1);
        int pattern = b0 + 2 * b1 + 4 * b2 + 8 * b3;
        if (pattern == 0 || pattern == 15) continue;
        int bottom = edge_id(0, j, k);
        int top = edge_id(0, j, k + 1);
        int left = edge_id(1, j, k);
        int right = edge_id(1, j + 1, k);
        switch (pattern) {
          case 1: case 14: add_segment(left, bottom); break;
          case 2: case 13: add_segment(bottom, right); break;
          case 4: case 11: add_segment(right, top); break;
          case 8: case 7: add_segment(top, left); break;
          case 3: case 12: add_segment(left, right); break;
          case 6: case 9: add_segment(bottom, top); break;
          case 5: case 10: {
            // Saddle: resolve by the sign at the cell center.
            double c = 0.25 * (value(j, k) + value(j + 1, k) +
                               value(j + 1, k + 1) + value(j, k + 1));
            bool connect_positive_diag = (c > 0.0) == (pattern == 5);
            if (connect_positive_diag) {
              add_segment(bottom, right);
              add_segment(top, left);
            } else {
              add_segment(left, bottom);
              add_segment(right, top);
            }
            break;
          }
        }
      }
    }

    require(!links.empty(), "weight has no sign change: zero curve is empty");

    CurveSample sample;
    std::unordered_map<int, bool> visited;
    for (const auto& [start, partners] : links) {
      (void)partners;
      if (visited[start]) continue;
      CurveComponent comp;
      int prev = -1;
      int cur = start;
      do {
        visited[cur] = true;
        int type = cur / g.size();
        int rem = cur % g.size();
        comp.pts.push_back(crossing_point(type, rem % g.nx, rem / g.nx));
        const auto& lk = links.at(cur);
        int next = (lk[0] == prev) ? lk[1] : lk[0];
        prev = cur;
        cur = next;
      } while (cur != start);
      sample.components.push_back(std::move(comp));
    }

    for (auto& comp : sample.components) {
      const size_t n = comp.pts.size();
      comp.dn_lap.resize(n);
      comp.seg_length.resize(n);
      for (size_t i = 0; i < n; ++i) {
        double px = comp.pts[i][0];
        double py = comp.pts[i][1];
        double vx = interp_bilinear(gx, px, py);
        double vy = interp_bilinear(gy, px, py);
        comp.dn_lap[i] = std::hypot(vx, vy);
        const auto& q = comp.pts[(i + 1) % n];
        double ddx = std::remainder(q[0] - px, kTwoPi);
        double ddy = std::remainder(q[1] - py, kTwoPi);
        comp.seg_length[i] = std::hypot(ddx, ddy);
      }
    }
    return sample;
  }
};

}  // namespace

CurveSample extract_zero_curve(const Weight& w, double floor_rel) {
  auto [gx, gy] = gradient(w.lap_phi);
  double gmax = 0.0;
  for (size_t i = 0; i < gx.values.size(); ++i)
    gmax = std::max(gmax, std::hypot(gx.values[i], gy.values[i]));

  CurveExtractor extractor{w.lap_phi.grid, w.lap_phi, gx, gy};
  CurveSample sample = extractor.run();

  double dn_min = std::numeric_limits<double>::infinity();
  for (const auto& comp : sample.components)
    for (double v : comp.dn_lap) dn_min = std::min(dn_min, v);
  require(dn_min > floor_rel * gmax,
          "zero curve fails the transversality floor: min |grad lap_phi| = " +
              std::to_string(dn_min) + " along the curve, floor = " +
              std::to_string(floor_rel * gmax));
  return sample;
}

double curve_integral_third_power(const CurveSample& c) {
  double total = 0.0;
  for (const auto& comp : c.components) {
    const size_t n = comp.pts.size();
    for (size_t i = 0; i < n; ++i) {
      double mid = 0.5 * (comp.dn_lap[i] + comp.dn_lap[(i + 1) % n]);
      total += std::cbrt(mid) * comp.seg_length[i];
    }
  }
  return total;
}

}  // namespace dbarlab
