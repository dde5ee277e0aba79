#pragma once

#include "dbarlab/contact.hpp"
#include "dbarlab/op.hpp"
#include "dbarlab/oracle.hpp"

namespace dbarlab {

struct HarnessOptions {
  PsorOptions psor;
  double contact_delta = 0.0;  // <= 0: derived from the solver tolerance
  int workers = 1;
  int dense_cap = kDenseCapDefault;
};

/// Weyl count check at one h: n_observed vs V_plus/(2 pi h).
struct WeylReport {
  double h = 0.0;
  double tau = 0.0;
  int n_observed = -1;  // -1 when the h was skipped (precision guard)
  double weyl_prediction = 0.0;
  double ratio = 0.0;
  std::vector<std::string> flags;
};

std::vector<WeylReport> run_weyl(const Weight& w, double tau,
                                 const std::vector<double>& h_list,
                                 const HarnessOptions& opt = {});

/// For tau above the oscillation the interval [0, e^{-tau/h}] must hold
/// exactly the kernel.
struct LargeTauReport {
  double tau = 0.0;
  std::vector<double> h_list;
  std::vector<int> counts;
  bool all_one = false;
};

LargeTauReport large_tau_check(const Weight& w, double tau,
                               const std::vector<double>& h_list,
                               const HarnessOptions& opt = {});

/// Volume-deficit asymptotics in the small-tau regime: deficit(tau) =
/// Vol(M_plus) - V_plus(tau) against tau^{2/3} * (1/2)(3/2)^{2/3} *
/// integral_gamma (dn lap phi)^{1/3} dx.
struct ThinBandReport {
  std::vector<double> tau_list;  // taus kept in the fit
  std::vector<double> deficit;
  std::vector<double> predicted;
  double fitted_exponent = 0.0;
  double fitted_coeff_ratio = 0.0;
  double curve_integral = 0.0;
  double vol_m_plus = 0.0;
  int curve_components = 0;
  std::vector<std::string> flags;
};

ThinBandReport thin_band(const Weight& w, const std::vector<double>& tau_list,
                         const HarnessOptions& opt = {});

/// Localization of the singular states below e^{-tau/h} near M_plus(psi):
/// the l2 mass outside a radius-r neighborhood decays exponentially in 1/h.
/// The kernel state (index 0) localizes at the minimum of phi instead and is
/// excluded from the fit.
struct DecayReport {
  double tau = 0.0;
  double radius = 0.0;
  std::vector<double> h_list;
  std::vector<double> max_outside_mass;  // negative when h was skipped
  std::vector<int> state_counts;
  double slope = 0.0;  // d log(max outside mass) / d(1/h)
  std::vector<std::string> flags;
};

DecayReport decay_experiment(const Weight& w, double tau,
                             const std::vector<double>& h_list, double radius,
                             const HarnessOptions& opt = {});

/// 2-D spectrum against the separation-of-variables oracle for y-only
/// weights: exact count agreement at e^{-tau/h} and relative agreement of the
/// lowest singular values.
struct OracleCompareReport {
  double tau = 0.0;
  std::vector<double> h_list;
  std::vector<int> counts_2d;
  std::vector<int> counts_oracle;
  std::vector<double> max_rel_diff_low;  // over the lowest compared svals
  int compared = 0;
  bool counts_match = false;
};

OracleCompareReport compare_with_oracle(const Weight& w, double tau,
                                        const std::vector<double>& h_list,
                                        int lowest = 50,
                                        const HarnessOptions& opt = {});

/// Least-squares slope and intercept of y against x.
std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y);

/// Contact margin used by the campaigns: binding detection on PSOR output is
/// solver-tolerance-controlled.
double campaign_contact_delta(const HarnessOptions& opt);

}  // namespace dbarlab
