#pragma once

#include <filesystem>
#include <string>

#include "dbarlab/contact.hpp"
#include "dbarlab/harness.hpp"
#include "dbarlab/weight.hpp"

namespace dbarlab {

/// Field CSV format: header line "# nx=<nx> ny=<ny>", then ny rows of nx
/// comma-separated values; row k holds y = k*dy. Complex fields split into
/// two files suffixed _re / _im.

void dump_scalar_csv(const std::filesystem::path& path, const ScalarField& f);
ScalarField load_scalar_csv(const std::filesystem::path& path);
void dump_complex_csv(const std::filesystem::path& base_path,
                      const ComplexField& f);
void dump_mask_csv(const std::filesystem::path& path, const TorusGrid& grid,
                   const std::vector<uint8_t>& mask);

std::string mask_runlength_json(const TorusGrid& grid,
                                const std::vector<uint8_t>& mask);

void dump_curve_csv(const std::filesystem::path& path, const CurveSample& c);

/// {h, svals[], counts{}, flags[]} as per the spectrum interface.
std::string spectrum_json(const SpectrumResult& s);
void dump_spectrum_csv(const std::filesystem::path& path,
                       const SpectrumResult& s);

std::string obstacle_sidecar_json(const ObstacleSolution& sol);
std::string structure_report_json(const StructureReport& rep,
                                  const ContactSets& cs,
                                  double v_plus, double v_minus);
std::string weyl_reports_json(const std::vector<WeylReport>& reports);
void dump_weyl_csv(const std::filesystem::path& path, const std::string& weight,
                   const std::vector<WeylReport>& reports);
std::string large_tau_json(const LargeTauReport& rep);
std::string thin_band_json(const ThinBandReport& rep);
void dump_thin_band_csv(const std::filesystem::path& path,
                        const std::string& weight, const ThinBandReport& rep);
std::string decay_json(const DecayReport& rep);
void dump_decay_csv(const std::filesystem::path& path,
                    const std::string& weight, const DecayReport& rep);
std::string oracle_compare_json(const OracleCompareReport& rep);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

/// Repeatable shortest round-trip formatting used by every artifact.
std::string format_double(double v);

}  // namespace dbarlab
