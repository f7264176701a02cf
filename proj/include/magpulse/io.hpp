#pragma once

// File formats: grid and sweep exports, two-channel trace CSV, reports.

#include "magpulse/dsp/pipeline.hpp"
#include "magpulse/dsp/types.hpp"
#include "magpulse/placement.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace magpulse::io {

/// Writes content to path via a temporary file and rename.
void write_file_atomic(const std::string& path, std::string_view content);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);

/// %.6g formatting used for every Oe column.
std::string six_significant(double v);

// Grid CSV, one row per node in z-major order (x varies fastest):
//   x_m,z_m,Hx_Apm,Hx_Oe,dHx_disp_Apm,dHx_disp_Oe,dHx_rot_Apm,dHx_rot_Oe,
//   dHx_chi_Apm,dHx_chi_Oe,dHx_chi_1e-4Oe,valid,feasible
// SI columns carry 17 significant digits so they parse back bit-identically.
// Field columns are components along the sensor axis.
std::string grid_to_csv(const SensitivityGrid& grid);
std::string grid_to_json(const SensitivityGrid& grid);

struct GridRow {
  double x = 0.0, z = 0.0;
  double hx = 0.0, dhx_disp = 0.0, dhx_rot = 0.0, dhx_chi = 0.0;
  bool valid = false, feasible = false;
};
/// Parses the SI columns of grid_to_csv output.
std::vector<GridRow> parse_grid_csv(std::string_view csv);

/// Oe columns only, as written: a layout-stable fingerprint for regression checks.
std::uint64_t grid_checksum(const SensitivityGrid& grid);

std::string ranking_to_csv(const Ranking& ranking, const SensorSpec& sensor);

/// Columns x,dz_or_beta,dH_dipole,dH_numeric,rel_err for rows of one mode.
std::string sweep_to_csv(const std::vector<SweepRow>& rows, SweepMode mode);

/// Single channel as t,value.
std::string trace_to_csv(const dsp::PulseTrace& trace);
/// Reads t,value; the sample rate is recovered from the time column.
dsp::PulseTrace parse_trace_csv(std::string_view csv, dsp::Channel channel);

/// t,magnetic,vibration with t = i / fs.
std::string traces_to_csv(const dsp::PulseTrace& magnetic, const dsp::PulseTrace& vibration);

/// Reads t,magnetic,vibration (column order free, extra columns ignored).
/// The sample rate is recovered from the time column. Throws ConfigError on a
/// missing column or malformed row.
std::pair<dsp::PulseTrace, dsp::PulseTrace> parse_traces_csv(std::string_view csv);

std::string template_to_csv(const dsp::PulseTemplate& magnetic, const dsp::PulseTemplate& vibration);
std::string segment_templates_to_csv(const dsp::PipelineResult& result);

/// {bias, sd, loa_lower, loa_upper, pct_within_loa, max_deviation_pct, n_points,
///  n_pulses, r_trace, r_template, ...}
std::string report_to_json(const dsp::PipelineResult& result);

std::string read_file(const std::string& path);

}  // namespace magpulse::io
