#include "dbarlab/contact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dbarlab {

int ContactSets::plus_count() const {
  return static_cast<int>(
      std::accumulate(m_plus.begin(), m_plus.end(), 0));
}

int ContactSets::minus_count() const {
  return static_cast<int>(
      std::accumulate(m_minus.begin(), m_minus.end(), 0));
}

ContactSets extract_contact_sets(const ObstacleSolution& sol, const Weight& w,
                                 double delta) {
  const TorusGrid& g = w.phi.grid;
  require(sol.psi.grid == g, "solution grid mismatch");
  require(delta >= sol.box_tol,
          "contact delta " + std::to_string(delta) +
              " below the solver box slack " + std::to_string(sol.box_tol));
  require(delta < 0.5 * sol.tau,
          "contact delta too large relative to tau: masks would overlap");

  ContactSets cs;
  cs.grid = g;
  cs.delta = delta;
  const size_t n = w.phi.values.size();
  cs.m_plus.assign(n, 0);
  cs.m_minus.assign(n, 0);
  cs.band.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    double gap_hi = w.phi.values[i] - sol.psi.values[i];
    double gap_lo = sol.psi.values[i] - (w.phi.values[i] - sol.tau);
    bool plus = gap_hi <= delta;
    bool minus = gap_lo <= delta;
    require(!(plus && minus), "contact masks overlap: delta too large");
    cs.m_plus[i] = plus;
    cs.m_minus[i] = minus;
    cs.band[i] = !(plus || minus);
  }

  auto klass = [&](int j, int k) -> int {
    int i = g.index((j % g.nx + g.nx) % g.nx, (k % g.ny + g.ny) % g.ny);
    return cs.m_plus[i] ? 2 : (cs.m_minus[i] ? 1 : 0);
  };
  int straddling = 0;
  for (int k = 0; k < g.ny; ++k) {
    for (int j = 0; j < g.nx; ++j) {
      int c = klass(j, k);
      if (klass(j + 1, k) != c || klass(j, k + 1) != c ||
          klass(j + 1, k + 1) != c)
        ++straddling;
    }
  }
  cs.fb_cell_count = straddling;
  return cs;
}

std::pair<double, double> contact_volumes(const ContactSets& cs,
                                          const Weight& w) {
  require(cs.grid == w.phi.grid, "contact sets grid mismatch");
  double sp = 0.0, sm = 0.0;
  for (size_t i = 0; i < cs.m_plus.size(); ++i) {
    if (cs.m_plus[i]) sp += w.lap_phi.values[i];
    if (cs.m_minus[i]) sm += w.lap_phi.values[i];
  }
  const double area = cs.grid.cell_area();
  return {sp * area, sm * area};
}

StructureReport assert_structure(const ContactSets& cs, const Weight& w,
                                 double sign_tol_rel) {
  require(cs.grid == w.phi.grid, "contact sets grid mismatch");
  StructureReport rep;
  rep.sign_tol = sign_tol_rel * max_abs(w.lap_phi);
  rep.fb_area = cs.fb_area();

  double plus_min = std::numeric_limits<double>::infinity();
  double minus_min = std::numeric_limits<double>::infinity();
  int np = 0, nm = 0;
  for (size_t i = 0; i < cs.m_plus.size(); ++i) {
    double lap = w.lap_phi.values[i];
    if (cs.m_plus[i]) {
      plus_min = std::min(plus_min, lap);
      ++np;
    }
    if (cs.m_minus[i]) {
      minus_min = std::min(minus_min, -lap);
      ++nm;
    }
  }
  const double total = static_cast<double>(cs.m_plus.size());
  rep.plus_fraction = np / total;
  rep.minus_fraction = nm / total;
  rep.plus_margin = np > 0 ? plus_min : 0.0;
  rep.minus_margin = nm > 0 ? minus_min : 0.0;
  rep.sign_ok = np > 0 && nm > 0 && rep.plus_margin > -rep.sign_tol &&
                rep.minus_margin > -rep.sign_tol;
  rep.separation_ok = np > 0 && nm > 0 && rep.plus_margin > 0.0 &&
                      rep.minus_margin > 0.0;
  rep.volume_ok = rep.plus_fraction >= 0.01 && rep.minus_fraction >= 0.01;
  return rep;
}

}  // namespace dbarlab
