#pragma once

// Scenario configuration and the four CLI pipelines (rabi, phasespace,
// verify, sample). Each pipeline writes its artifacts into an output
// directory and returns the JSON it wrote.

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "sweq/swe.hpp"

namespace sweq::cli {

struct FieldInit {
  std::string kind = "vacuum";  ///< vacuum | fock | coherent
  int n = 0;
  Complex alpha{};

  bool operator==(const FieldInit&) const = default;
};

struct ScenarioConfig {
  AtomFieldModel model = AtomFieldModel::two_level(1.0, 0.0);
  int n_max = 8;
  double extent = 5.0;
  int points = 128;
  TimeGrid time = default_time();
  std::string backend = "bargmann";  ///< bargmann | grid
  ComplexVector initial_atom = ComplexVector::Unit(2, 1);
  FieldInit initial_field;
  int sample_count = 10000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  double kernel_variance = 0.5;  ///< testing hook for the smoothing kernel

  static TimeGrid default_time();

  PhaseGrid grid() const { return PhaseGrid(extent, points); }
  CompositeSpace space() const { return CompositeSpace(static_cast<int>(model.h_atom.rows()), FockBasis(n_max)); }
  CompositeState initial_state() const;
  void validate() const;
};

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

/// Presets expand to explicit matrices; unknown keys are rejected.
ScenarioConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& c);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Time grid from 0 to t > 0 with step at most the configured dt.
TimeGrid horizon(const ScenarioConfig& c, double t);

/// Initial wave in the configured backend, evolved to time t.
SemiclassicalWave evolve_swe(const ScenarioConfig& c, double t);

/// Writes rabi_timeseries.csv and report.json.
nlohmann::json run_rabi(const ScenarioConfig& c, const std::filesystem::path& out);

/// Writes field_<kind>_t<t>.csv; kind is wigner | husimi | swe-density.
std::filesystem::path run_phasespace(const ScenarioConfig& c, double t, const std::string& kind,
                                     const std::filesystem::path& out);

struct VerifyResult {
  nlohmann::json report;
  bool passed = false;
};

/// Runs the identity checks at config scale and writes verify.json.
VerifyResult run_verify(const ScenarioConfig& c, const std::filesystem::path& out);

/// Writes samples.csv and sample_summary.json.
nlohmann::json run_sample(const ScenarioConfig& c, double t, const std::filesystem::path& out);

}  // namespace sweq::cli
