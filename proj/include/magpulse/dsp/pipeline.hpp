#pragma once

#include "magpulse/dsp/types.hpp"

#include <cstddef>
#include <vector>

namespace magpulse::dsp {

struct SegmentResult {
  std::size_t index = 0;
  PulseTrace magnetic;   // band-passed, z-scored
  PulseTrace vibration;  // band-passed, z-scored
  std::vector<std::size_t> magnetic_peaks;
  std::vector<std::size_t> vibration_peaks;
  // Both templates are cut at the magnetic peaks so they stay sample-aligned.
  PulseTemplate magnetic_template;
  PulseTemplate vibration_template;
  // Every template beat, z-scored per beat and concatenated: the Bland-Altman pairs.
  std::vector<double> beat_magnetic;
  std::vector<double> beat_vibration;
};

struct PipelineResult {
  std::vector<SegmentResult> segments;
  PulseTemplate magnetic_template;  // mean of the segment templates, z-scored
  PulseTemplate vibration_template;
  PulseTemplate magnetic_acceleration;
  PulseTemplate vibration_acceleration;
  double r_trace = 0.0;     // over the concatenated processed segments
  double r_template = 0.0;  // over the concatenated segment templates
  double heart_rate_bpm = 0.0;            // from the magnetic channel
  double vibration_heart_rate_bpm = 0.0;
  BlandAltmanReport bland_altman;  // per-sample pairs of the z-scored template beats
};

/// Splits both channels into cfg.segment_s blocks (a trailing partial block is
/// ignored) and runs band-pass, z-score, peak detection and beat averaging on
/// each. Stage errors are rethrown with the segment index.
PipelineResult run_pipeline(const PulseTrace& magnetic, const PulseTrace& vibration,
                            const PipelineConfig& cfg);

}  // namespace magpulse::dsp
