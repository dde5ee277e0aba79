#include "dbarlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace dbarlab {

namespace {

constexpr double kThinBandCoef = 0.65518706734069500;  // (1/2)(3/2)^(2/3)

// Runs fn(i) for i in [0, count) on opt workers; deterministic result slots,
// first exception (by index) rethrown.
void run_jobs(int count, int workers, const std::function<void(int)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  int n_threads = std::min(workers, count);
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void check_precision_guard(double tau, double h) {
  require(tau / h <= kTauOverHMax,
          "precision floor: tau/h = " + std::to_string(tau / h) + " > " +
              std::to_string(kTauOverHMax) +
              "; increase h or use smaller tau");
}

}  // namespace

double campaign_contact_delta(const HarnessOptions& opt) {
  return opt.contact_delta > 0.0 ? opt.contact_delta
                                 : std::max(10.0 * opt.psor.tol, 1e-12);
}

std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2,
          "fit_line needs at least two points");
  const double n = static_cast<double>(x.size());
  double xm = 0.0, ym = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  require(sxx > 0.0, "fit_line: degenerate abscissae");
  double slope = sxy / sxx;
  return {slope, ym - slope * xm};
}

std::vector<WeylReport> run_weyl(const Weight& w, double tau,
                                 const std::vector<double>& h_list,
                                 const HarnessOptions& opt) {
  require(tau > 0.0 && tau < w.osc,
          "run_weyl needs 0 < tau < oscillation; tau >= oscillation belongs "
          "to the large-tau check");
  require(!h_list.empty(), "empty h list");

  ObstacleSolution sol = solve_psor(w, tau, opt.psor);
  ContactSets cs = extract_contact_sets(sol, w, campaign_contact_delta(opt));
  const double v_plus = contact_volumes(cs, w).first;

  std::vector<WeylReport> reports(h_list.size());
  run_jobs(static_cast<int>(h_list.size()), opt.workers, [&](int i) {
    WeylReport& r = reports[i];
    r.h = h_list[i];
    r.tau = tau;
    r.weyl_prediction = v_plus / (kTwoPi * r.h);
    if (tau / r.h > kTauOverHMax) {
      r.flags.push_back("skipped: tau/h = " + std::to_string(tau / r.h) +
                        " exceeds the precision guard " +
                        std::to_string(kTauOverHMax));
      return;
    }
    OperatorMatrix m = assemble(w, r.h);
    SpectrumResult spec = singular_values(m, opt.dense_cap);
    r.n_observed = count_below(spec, std::exp(-tau / r.h));
    r.flags.insert(r.flags.end(), spec.flags.begin(), spec.flags.end());
    r.ratio = r.n_observed / r.weyl_prediction;
  });
  return reports;
}

LargeTauReport large_tau_check(const Weight& w, double tau,
                               const std::vector<double>& h_list,
                               const HarnessOptions& opt) {
  require(tau > w.osc,
          "large-tau check needs tau strictly above the oscillation " +
              std::to_string(w.osc));
  require(!h_list.empty(), "empty h list");
  LargeTauReport rep;
  rep.tau = tau;
  rep.h_list = h_list;
  rep.counts.assign(h_list.size(), -1);
  run_jobs(static_cast<int>(h_list.size()), opt.workers, [&](int i) {
    check_precision_guard(tau, h_list[i]);
    OperatorMatrix m = assemble(w, h_list[i]);
    SpectrumResult spec = singular_values(m, opt.dense_cap);
    rep.counts[i] = count_below(spec, std::exp(-tau / h_list[i]));
  });
  rep.all_one = std::all_of(rep.counts.begin(), rep.counts.end(),
                            [](int c) { return c == 1; });
  return rep;
}

ThinBandReport thin_band(const Weight& w, const std::vector<double>& tau_list,
                         const HarnessOptions& opt) {
  require(tau_list.size() >= 5, "thin-band needs at least 5 tau values");
  for (double tau : tau_list)
    require(tau > 0.0 && tau <= 0.2 * w.osc + 1e-12,
            "thin-band tau " + std::to_string(tau) +
                " outside (0, 0.2*oscillation]");

  ThinBandReport rep;
  CurveSample curve = extract_zero_curve(w);
  rep.curve_components = static_cast<int>(curve.components.size());
  rep.curve_integral = curve_integral_third_power(curve);
  rep.vol_m_plus = positive_region_volume(w);
  if (rep.curve_components > 1)
    rep.flags.push_back(
        "zero curve has " + std::to_string(rep.curve_components) +
        " components; using the per-component sum of the curve integral");

  struct Point {
    double tau, deficit, predicted;
    bool keep;
    std::string flag;
  };
  std::vector<Point> pts(tau_list.size());
  run_jobs(static_cast<int>(tau_list.size()), opt.workers, [&](int i) {
    Point& p = pts[i];
    p.tau = tau_list[i];
    p.predicted = std::pow(p.tau, 2.0 / 3.0) * kThinBandCoef *
                  rep.curve_integral;
    ObstacleSolution sol = solve_psor(w, p.tau, opt.psor);
    ContactSets cs =
        extract_contact_sets(sol, w, campaign_contact_delta(opt));
    // Band resolution guard: a cell holding both contact classes means the
    // O(tau^{1/3}) band fell under the grid.
    const TorusGrid& g = cs.grid;
    bool merged = false;
    for (int k = 0; k < g.ny && !merged; ++k) {
      for (int j = 0; j < g.nx && !merged; ++j) {
        bool has_plus = false, has_minus = false;
        for (auto [dj, dk] : {std::pair{0, 0}, std::pair{1, 0},
                              std::pair{0, 1}, std::pair{1, 1}}) {
          int i2 = g.index((j + dj) % g.nx, (k + dk) % g.ny);
          has_plus |= cs.m_plus[i2] != 0;
          has_minus |= cs.m_minus[i2] != 0;
        }
        merged = has_plus && has_minus;
      }
    }
    if (merged) {
      p.keep = false;
      p.flag = "tau = " + std::to_string(p.tau) +
               " dropped: contact sets merge with the band at this grid";
      return;
    }
    p.deficit = rep.vol_m_plus - contact_volumes(cs, w).first;
    if (p.deficit <= 0.0) {
      p.keep = false;
      p.flag = "tau = " + std::to_string(p.tau) +
               " dropped: nonpositive volume deficit";
      return;
    }
    p.keep = true;
  });

  std::vector<double> log_tau, log_def, log_ratio;
  for (const Point& p : pts) {
    if (!p.keep) {
      rep.flags.push_back(p.flag);
      continue;
    }
    rep.tau_list.push_back(p.tau);
    rep.deficit.push_back(p.deficit);
    rep.predicted.push_back(p.predicted);
    log_tau.push_back(std::log(p.tau));
    log_def.push_back(std::log(p.deficit));
    log_ratio.push_back(std::log(p.deficit / p.predicted));
  }
  require(log_tau.size() >= 2, "thin-band: too few usable tau values");
  rep.fitted_exponent = fit_line(log_tau, log_def).first;
  double mean_log_ratio = 0.0;
  for (double v : log_ratio) mean_log_ratio += v;
  rep.fitted_coeff_ratio =
      std::exp(mean_log_ratio / static_cast<double>(log_ratio.size()));
  return rep;
}

DecayReport decay_experiment(const Weight& w, double tau,
                             const std::vector<double>& h_list, double radius,
                             const HarnessOptions& opt) {
  require(tau > 0.0 && tau < w.osc, "decay experiment needs 0 < tau < osc");
  require(radius > 0.0, "neighborhood radius must be positive");
  require(!h_list.empty(), "empty h list");

  // The obstacle solution and its contact set do not depend on h.
  ObstacleSolution sol = solve_psor(w, tau, opt.psor);
  ContactSets cs = extract_contact_sets(sol, w, campaign_contact_delta(opt));

  const TorusGrid& g = w.phi.grid;
  std::vector<std::pair<double, double>> plus_nodes;
  for (int k = 0; k < g.ny; ++k)
    for (int j = 0; j < g.nx; ++j)
      if (cs.m_plus[g.index(j, k)]) plus_nodes.emplace_back(g.x(j), g.y(k));
  require(!plus_nodes.empty(), "upper contact set empty");

  std::vector<uint8_t> outside(static_cast<size_t>(g.size()), 1);
  const double r2 = radius * radius;
  for (int k = 0; k < g.ny; ++k) {
    for (int j = 0; j < g.nx; ++j) {
      double x = g.x(j), y = g.y(k);
      for (const auto& [px, py] : plus_nodes) {
        double dx = std::remainder(x - px, kTwoPi);
        double dy = std::remainder(y - py, kTwoPi);
        if (dx * dx + dy * dy <= r2) {
          outside[g.index(j, k)] = 0;
          break;
        }
      }
    }
  }

  DecayReport rep;
  rep.tau = tau;
  rep.radius = radius;
  rep.h_list = h_list;
  rep.max_outside_mass.assign(h_list.size(), -1.0);
  rep.state_counts.assign(h_list.size(), 0);
  rep.flags.push_back("kernel state (index 0) excluded from the fit");

  run_jobs(static_cast<int>(h_list.size()), opt.workers, [&](int i) {
    const double h = h_list[i];
    if (tau / h > kTauOverHMax) {
      rep.flags.push_back("h = " + std::to_string(h) +
                          " skipped by the precision guard");
      return;
    }
    OperatorMatrix m = assemble(w, h);
    DenseSvd svd = dense_svd(m, /*with_vectors=*/true, opt.dense_cap);
    const double threshold = std::exp(-tau / h);
    double worst = -1.0;
    int n_states = 0;
    for (int idx = 1; idx < svd.dim && svd.svals[idx] <= threshold; ++idx) {
      const cdouble* v = svd.vector(idx);
      double mass = 0.0;
      for (int p = 0; p < svd.dim; ++p)
        if (outside[p]) mass += std::norm(v[p]);
      worst = std::max(worst, mass);
      ++n_states;
    }
    rep.state_counts[i] = n_states;
    if (n_states == 0) {
      rep.flags.push_back("h = " + std::to_string(h) +
                          " skipped: no states below the threshold");
      return;
    }
    rep.max_outside_mass[i] = worst;
  });

  std::vector<double> inv_h, log_mass;
  for (size_t i = 0; i < h_list.size(); ++i) {
    if (rep.max_outside_mass[i] < 0.0) continue;
    inv_h.push_back(1.0 / h_list[i]);
    log_mass.push_back(std::log(std::max(rep.max_outside_mass[i], 1e-300)));
  }
  require(inv_h.size() >= 2, "decay experiment: too few usable h values");
  rep.slope = fit_line(inv_h, log_mass).first;
  return rep;
}

OracleCompareReport compare_with_oracle(const Weight& w, double tau,
                                        const std::vector<double>& h_list,
                                        int lowest, const HarnessOptions& opt) {
  require(tau > 0.0, "tau must be positive");
  OracleCompareReport rep;
  rep.tau = tau;
  rep.h_list = h_list;
  rep.compared = lowest;
  rep.counts_2d.assign(h_list.size(), -1);
  rep.counts_oracle.assign(h_list.size(), -1);
  rep.max_rel_diff_low.assign(h_list.size(), 0.0);
  for (size_t i = 0; i < h_list.size(); ++i) {
    const double h = h_list[i];
    check_precision_guard(tau, h);
    OperatorMatrix m = assemble(w, h);
    SpectrumResult two_d = singular_values(m, opt.dense_cap);
    SpectrumResult oracle = oracle_spectrum_for_weight(w, h);
    const double threshold = std::exp(-tau / h);
    rep.counts_2d[i] = count_below(two_d, threshold);
    rep.counts_oracle[i] = count_below(oracle, threshold);
    int n = std::min<int>(lowest, static_cast<int>(
                                      std::min(two_d.svals.size(),
                                               oracle.svals.size())));
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      double a = two_d.svals[j], b = oracle.svals[j];
      double scale = std::max({a, b, kPrecisionFloorRel * two_d.svals.back()});
      worst = std::max(worst, std::abs(a - b) / scale);
    }
    rep.max_rel_diff_low[i] = worst;
  }
  rep.counts_match = true;
  for (size_t i = 0; i < h_list.size(); ++i)
    rep.counts_match &= rep.counts_2d[i] == rep.counts_oracle[i];
  return rep;
}

}  // namespace dbarlab
