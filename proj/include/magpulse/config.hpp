#pragma once

// Geometry / run configuration loaded from JSON.
//
// Every section and key is optional; omitted values fall back to the reference
// device. Physical quantities are either bare numbers in SI units or strings
// with an explicit unit suffix, e.g. "5 mm", "962.9 kA/m", "100 Oe",
// "1.28 mV/Oe", "3.3 mrad". Unknown keys are rejected.
//
//   {
//     "magnets":    {"radius": "5 mm", "thickness": "5 mm", "ms": "962.9 kA/m", "surface_gap": "9 mm"},
//     "finger":     {"half_extents": ["10 mm", "5 mm", "4.5 mm"], "center": [0, 0, 0], "chi": 1e-7},
//     "sensor":     {"position": ["17.5 mm", 0, "7.5 mm"], "axis": [1, 0, 0],
//                    "sensitivity": "1.28 mV/Oe", "dynamic_range": "100 Oe"},
//     "quadrature": {"radial_nodes": 16, "angular_nodes": 48, "volume_nodes_per_axis": 10},
//     "grid":       {"x_range": ["6 mm", "30 mm"], "z_range": ["0 mm", "16 mm"], "nx": 121, "nz": 81,
//                    "y_plane": 0},
//     "sweep":      {"x": ["10 mm", "15 mm", "20 mm", "25 mm"], "dz": ["0 um", "50 um"], "beta": [0, "3.3 mrad"]},
//     "blood":      {"hct": 0.45, "hbo2": 1.0, "dchi_oxy": -2e-8, "dchi_do": 2.7e-7, "chi_water": 7.18e-7},
//     "synth":      {"heart_rate_bpm": 72, "duration_s": 90, "seed": 1, ...},
//     "pipeline":   {"segment_s": 30, "band": ["0.8 Hz", "10 Hz"], ...}
//   }

#include "magpulse/dsp/synth.hpp"
#include "magpulse/dsp/types.hpp"
#include "magpulse/magnetostatics.hpp"
#include "magpulse/perturbation.hpp"
#include "magpulse/placement.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace magpulse {

struct SweepSpec {
  std::vector<double> x{10.0e-3, 15.0e-3, 20.0e-3, 25.0e-3};
  std::vector<double> dz{0.0, 10.0e-6, 25.0e-6, 50.0e-6, 100.0e-6};
  std::vector<double> beta{0.0, 1.0e-3, 2.0e-3, 3.3e-3, 5.0e-3};
};

struct RunConfig {
  MagnetAssembly assembly = MagnetAssembly::reference();
  FingerRegion finger{};
  SensorSpec sensor = SensorSpec::reference();
  QuadratureSpec quadrature{};
  GridSpec grid{};
  SweepSpec sweep{};
  BloodModel blood{};
  dsp::SynthConfig synth{};
  dsp::PipelineConfig pipeline{};
};

enum class Dimension { length, field, sensitivity, angle, frequency, time, dimensionless };

/// Parses "<number> [unit]" into SI for the given dimension. Throws ConfigError
/// naming `field` on a bad number or a unit of the wrong kind.
double parse_quantity(std::string_view text, Dimension dim, std::string_view field);

RunConfig parse_config(std::string_view json_text);
/// Throws ConfigError with the path and, for syntax errors, line and column.
RunConfig load_config(const std::string& path);

}  // namespace magpulse
