#pragma once

#include <cstdint>

#include "dbarlab/obstacle.hpp"

namespace dbarlab {

/// Node masks of the contact sets: m_plus where psi touches the upper
/// obstacle phi, m_minus where it touches phi - tau, band elsewhere. The
/// three classes partition the nodes. fb_cell_count counts grid cells whose
/// four corners do not share one class (cells straddled by a free boundary).
struct ContactSets {
  TorusGrid grid;
  std::vector<uint8_t> m_plus;
  std::vector<uint8_t> m_minus;
  std::vector<uint8_t> band;
  double delta = 0.0;
  int fb_cell_count = 0;

  int plus_count() const;
  int minus_count() const;
  double fb_area() const { return fb_cell_count * grid.cell_area(); }
};

/// Node-wise thresholding: phi - psi <= delta -> m_plus, psi - (phi - tau) <=
/// delta -> m_minus. Requires delta >= the solution's box slack (value gaps
/// are solver-tolerance-controlled) and delta < tau/2 (disjoint masks).
ContactSets extract_contact_sets(const ObstacleSolution& sol, const Weight& w,
                                 double delta);

/// (v_plus, v_minus) = (integrate(lap_phi * m_plus), integrate(lap_phi *
/// m_minus)). For a converged solution v_plus = -v_minus up to the
/// free-boundary collar.
std::pair<double, double> contact_volumes(const ContactSets& cs,
                                          const Weight& w);

/// Structural checks on the contact sets (report-only):
///  (a) sign condition: lap phi > -sign_tol on m_plus, < +sign_tol on m_minus
///  (b) separation: strict margins min_{m_plus} lap phi and
///      min_{m_minus}(-lap phi) are positive
///  (c) positive volume: both masks hold >= 1% of the nodes
///  (d) fb_area reported; the free-boundary nullity trend is checked by
///      callers across grid refinements.
struct StructureReport {
  bool sign_ok = false;
  bool separation_ok = false;
  bool volume_ok = false;
  double sign_tol = 0.0;
  double plus_margin = 0.0;   // min over m_plus of lap phi
  double minus_margin = 0.0;  // min over m_minus of -lap phi
  double plus_fraction = 0.0;
  double minus_fraction = 0.0;
  double fb_area = 0.0;

  bool all_ok() const { return sign_ok && separation_ok && volume_ok; }
};

StructureReport assert_structure(const ContactSets& cs, const Weight& w,
                                 double sign_tol_rel = 0.05);

}  // namespace dbarlab
