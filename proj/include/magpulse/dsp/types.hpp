#pragma once

#include <cstddef>
#include <vector>

namespace magpulse::dsp {

enum class Channel { magnetic, vibration };

/// Uniformly sampled recording. Magnetic channels carry volts, vibration
/// channels metres.
struct PulseTrace {
  std::vector<double> samples;
  double fs = 240.0;
  Channel channel = Channel::magnetic;

  /// Throws ConfigError unless fs > 0, at least two samples, all finite.
  void validate() const;
  double duration() const { return static_cast<double>(samples.size()) / fs; }
};

struct PipelineConfig {
  double segment_s = 30.0;
  double f_lo = 0.8;
  double f_hi = 10.0;
  double fs = 240.0;
  int filter_order = 4;          // per band edge
  int template_points = 240;
  double min_prominence = 0.5;   // SD units of the z-scored trace
  double min_distance_s = 0.33;
  double max_interval_cv = 0.12; // beat-interval regularity required of a segment; band-passed noise sits near 0.2
  int max_pulses_per_segment = 0;  // 0 = use every complete beat

  void validate() const;
};

/// One averaged beat, z-scored. Sample k sits at -0.3 T + k T / size.
struct PulseTemplate {
  std::vector<double> samples;
  std::size_t n_pulses = 0;
  double period_s = 0.0;

  double sample_rate() const { return static_cast<double>(samples.size()) / period_s; }
};

struct BlandAltmanReport {
  double bias = 0.0;
  double sd = 0.0;
  double loa_lower = 0.0;
  double loa_upper = 0.0;
  double pct_within_loa = 0.0;
  double max_deviation_pct = 0.0;   // 100 max|d| / peak-to-peak of the pair means
  double mean_deviation_pct = 0.0;  // 100 mean|d| / peak-to-peak of the pair means
  std::size_t n_points = 0;
  std::size_t n_pulses = 0;
};

}  // namespace magpulse::dsp
