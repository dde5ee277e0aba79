#include "dbarlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dbarlab {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path);
  require(out.good(), "cannot open " + path.string() + " for writing");
  out << content;
  require(out.good(), "write failed: " + path.string());
}

namespace {

std::string field_header(const TorusGrid& g) {
  return "# nx=" + std::to_string(g.nx) + " ny=" + std::to_string(g.ny) + "\n";
}

template <class Get>
void dump_grid_csv(const std::filesystem::path& path, const TorusGrid& g,
                   Get&& get) {
  std::ostringstream out;
  out << field_header(g);
  for (int k = 0; k < g.ny; ++k) {
    for (int j = 0; j < g.nx; ++j) {
      if (j) out << ',';
      out << get(j, k);
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

std::filesystem::path with_suffix(const std::filesystem::path& base,
                                  const std::string& suffix) {
  std::filesystem::path p = base;
  std::string stem = p.stem().string();
  std::string ext = p.extension().string();
  p.replace_filename(stem + suffix + (ext.empty() ? ".csv" : ext));
  return p;
}

}  // namespace

void dump_scalar_csv(const std::filesystem::path& path, const ScalarField& f) {
  dump_grid_csv(path, f.grid,
                [&](int j, int k) { return format_double(f.at(j, k)); });
}

ScalarField load_scalar_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  int nx = 0, ny = 0;
  require(std::sscanf(header.c_str(), "# nx=%d ny=%d", &nx, &ny) == 2,
          "bad field CSV header in " + path.string());
  ScalarField f(make_grid(nx, ny));
  for (int k = 0; k < ny; ++k) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)),
            "truncated field CSV " + path.string());
    std::istringstream row(line);
    std::string cell;
    for (int j = 0; j < nx; ++j) {
      require(static_cast<bool>(std::getline(row, cell, ',')),
              "short row in field CSV " + path.string());
      f.at(j, k) = std::stod(cell);
    }
  }
  require(all_finite(f), "non-finite value in field CSV " + path.string());
  return f;
}

void dump_complex_csv(const std::filesystem::path& base_path,
                      const ComplexField& f) {
  dump_grid_csv(with_suffix(base_path, "_re"), f.grid, [&](int j, int k) {
    return format_double(f.at(j, k).real());
  });
  dump_grid_csv(with_suffix(base_path, "_im"), f.grid, [&](int j, int k) {
    return format_double(f.at(j, k).imag());
  });
}

void dump_mask_csv(const std::filesystem::path& path, const TorusGrid& grid,
                   const std::vector<uint8_t>& mask) {
  dump_grid_csv(path, grid, [&](int j, int k) {
    return std::string(mask[grid.index(j, k)] ? "1" : "0");
  });
}

std::string mask_runlength_json(const TorusGrid& grid,
                                const std::vector<uint8_t>& mask) {
  ordered_json runs = ordered_json::array();
  size_t i = 0;
  while (i < mask.size()) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < mask.size() && mask[i]) ++i;
    runs.push_back({start, i - start});
  }
  ordered_json doc;
  doc["nx"] = grid.nx;
  doc["ny"] = grid.ny;
  doc["runs"] = runs;
  return doc.dump(2) + "\n";
}

void dump_curve_csv(const std::filesystem::path& path, const CurveSample& c) {
  std::ostringstream out;
  out << "component,x,y,dn_lap\n";
  for (size_t ci = 0; ci < c.components.size(); ++ci) {
    const auto& comp = c.components[ci];
    for (size_t i = 0; i < comp.pts.size(); ++i) {
      out << ci << ',' << format_double(comp.pts[i][0]) << ','
          << format_double(comp.pts[i][1]) << ','
          << format_double(comp.dn_lap[i]) << '\n';
    }
  }
  write_text_file(path, out.str());
}

std::string spectrum_json(const SpectrumResult& s) {
  ordered_json doc;
  doc["h"] = s.h;
  if (s.tau_ref) doc["tau_ref"] = *s.tau_ref;
  doc["svals"] = s.svals;
  ordered_json counts = ordered_json::object();
  for (const auto& [threshold, count] : s.n_below)
    counts[format_double(threshold)] = count;
  doc["counts"] = counts;
  doc["flags"] = s.flags;
  return doc.dump(2) + "\n";
}

void dump_spectrum_csv(const std::filesystem::path& path,
                       const SpectrumResult& s) {
  std::ostringstream out;
  out << "index,sval\n";
  for (size_t i = 0; i < s.svals.size(); ++i)
    out << i << ',' << format_double(s.svals[i]) << '\n';
  write_text_file(path, out.str());
}

std::string obstacle_sidecar_json(const ObstacleSolution& sol) {
  ordered_json doc;
  doc["tau"] = sol.tau;
  doc["method"] = to_string(sol.method);
  doc["iterations"] = sol.iterations;
  doc["residual"] = sol.residual;
  doc["box_tol"] = sol.box_tol;
  if (sol.penalty) {
    ordered_json p;
    p["phi_minus_0"] = sol.penalty->phi_minus_0;
    p["phi_plus_0"] = sol.penalty->phi_plus_0;
    p["mean_mode_min"] = sol.penalty->mean_mode_min;
    p["mean_mode_max"] = sol.penalty->mean_mode_max;
    p["final_epsilon"] = sol.penalty->final_epsilon;
    p["stages"] = sol.penalty->stages;
    doc["penalty"] = p;
  }
  return doc.dump(2) + "\n";
}

std::string structure_report_json(const StructureReport& rep,
                                  const ContactSets& cs, double v_plus,
                                  double v_minus) {
  ordered_json doc;
  doc["sign_ok"] = rep.sign_ok;
  doc["separation_ok"] = rep.separation_ok;
  doc["volume_ok"] = rep.volume_ok;
  doc["sign_tol"] = rep.sign_tol;
  doc["plus_margin"] = rep.plus_margin;
  doc["minus_margin"] = rep.minus_margin;
  doc["plus_fraction"] = rep.plus_fraction;
  doc["minus_fraction"] = rep.minus_fraction;
  doc["fb_cell_count"] = cs.fb_cell_count;
  doc["fb_area"] = rep.fb_area;
  doc["delta"] = cs.delta;
  doc["v_plus"] = v_plus;
  doc["v_minus"] = v_minus;
  return doc.dump(2) + "\n";
}

std::string weyl_reports_json(const std::vector<WeylReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json row;
    row["h"] = r.h;
    row["tau"] = r.tau;
    row["n_observed"] = r.n_observed;
    row["weyl_prediction"] = r.weyl_prediction;
    row["ratio"] = r.ratio;
    row["flags"] = r.flags;
    arr.push_back(row);
  }
  return arr.dump(2) + "\n";
}

void dump_weyl_csv(const std::filesystem::path& path, const std::string& weight,
                   const std::vector<WeylReport>& reports) {
  std::ostringstream out;
  out << "weight,tau,h,n_observed,weyl_prediction,ratio\n";
  for (const auto& r : reports) {
    out << weight << ',' << format_double(r.tau) << ',' << format_double(r.h)
        << ',' << r.n_observed << ',' << format_double(r.weyl_prediction)
        << ',' << format_double(r.ratio) << '\n';
  }
  write_text_file(path, out.str());
}

std::string large_tau_json(const LargeTauReport& rep) {
  ordered_json doc;
  doc["tau"] = rep.tau;
  doc["h_list"] = rep.h_list;
  doc["counts"] = rep.counts;
  doc["all_one"] = rep.all_one;
  return doc.dump(2) + "\n";
}

std::string thin_band_json(const ThinBandReport& rep) {
  ordered_json doc;
  doc["tau_list"] = rep.tau_list;
  doc["deficit"] = rep.deficit;
  doc["predicted"] = rep.predicted;
  doc["fitted_exponent"] = rep.fitted_exponent;
  doc["fitted_coeff_ratio"] = rep.fitted_coeff_ratio;
  doc["curve_integral"] = rep.curve_integral;
  doc["vol_m_plus"] = rep.vol_m_plus;
  doc["curve_components"] = rep.curve_components;
  doc["flags"] = rep.flags;
  return doc.dump(2) + "\n";
}

void dump_thin_band_csv(const std::filesystem::path& path,
                        const std::string& weight, const ThinBandReport& rep) {
  std::ostringstream out;
  out << "weight,tau,deficit,predicted\n";
  for (size_t i = 0; i < rep.tau_list.size(); ++i) {
    out << weight << ',' << format_double(rep.tau_list[i]) << ','
        << format_double(rep.deficit[i]) << ','
        << format_double(rep.predicted[i]) << '\n';
  }
  write_text_file(path, out.str());
}

std::string decay_json(const DecayReport& rep) {
  ordered_json doc;
  doc["tau"] = rep.tau;
  doc["radius"] = rep.radius;
  doc["h_list"] = rep.h_list;
  doc["max_outside_mass"] = rep.max_outside_mass;
  doc["state_counts"] = rep.state_counts;
  doc["slope"] = rep.slope;
  doc["flags"] = rep.flags;
  return doc.dump(2) + "\n";
}

void dump_decay_csv(const std::filesystem::path& path,
                    const std::string& weight, const DecayReport& rep) {
  std::ostringstream out;
  out << "weight,tau,h,max_outside_mass,n_states\n";
  for (size_t i = 0; i < rep.h_list.size(); ++i) {
    out << weight << ',' << format_double(rep.tau) << ','
        << format_double(rep.h_list[i]) << ','
        << format_double(rep.max_outside_mass[i]) << ','
        << rep.state_counts[i] << '\n';
  }
  write_text_file(path, out.str());
}

std::string oracle_compare_json(const OracleCompareReport& rep) {
  ordered_json doc;
  doc["tau"] = rep.tau;
  doc["h_list"] = rep.h_list;
  doc["counts_2d"] = rep.counts_2d;
  doc["counts_oracle"] = rep.counts_oracle;
  doc["max_rel_diff_low"] = rep.max_rel_diff_low;
  doc["compared"] = rep.compared;
  doc["counts_match"] = rep.counts_match;
  return doc.dump(2) + "\n";
}

}  // namespace dbarlab
