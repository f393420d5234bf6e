#pragma once

// CSV serialization of phase-space fields and waves, JSON for comparison
// reports. CSV files open with '#'-prefixed key=value metadata lines
// (kind, extent, points, dim, time) so a field reloads without its config.
// Floats use the shortest round-trip representation.

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "sweq/phasespace.hpp"
#include "sweq/swe.hpp"

namespace sweq {

std::string format_double(double v);

void write_csv(std::ostream& out, const PhaseFunction& f, double time = 0.0);
void write_csv(std::ostream& out, const OperatorPhaseField& f, double time = 0.0);
void write_csv(std::ostream& out, const GridWave& w);

struct LoadedPhaseFunction {
  PhaseFunction field;
  double time;
};

/// Reads a file written by write_csv(PhaseFunction).
LoadedPhaseFunction read_phase_function_csv(std::istream& in);

/// Reads a file written by write_csv(GridWave).
GridWave read_wave_csv(std::istream& in);

/// {"linf", "l2", "max_node_value", "moments": {name: {"swe": [re, im],
/// "oracle": [re, im], "delta"}}}
nlohmann::json to_json(const ComparisonReport& report);

}  // namespace sweq
