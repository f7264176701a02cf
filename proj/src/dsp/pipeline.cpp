#include "magpulse/dsp/pipeline.hpp"

#include "magpulse/dsp/butterworth.hpp"
#include "magpulse/dsp/pulse.hpp"
#include "magpulse/dsp/statistics.hpp"
#include "magpulse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace magpulse::dsp {
namespace {

PulseTrace slice(const PulseTrace& t, std::size_t begin, std::size_t count) {
  PulseTrace out;
  out.fs = t.fs;
  out.channel = t.channel;
  out.samples.assign(t.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                     t.samples.begin() + static_cast<std::ptrdiff_t>(begin + count));
  return out;
}

SegmentResult process_segment(std::size_t index, const PulseTrace& mag, const PulseTrace& vib,
                              const PipelineConfig& cfg) {
  SegmentResult seg;
  seg.index = index;
  seg.magnetic = zscore(bandpass(mag, cfg));
  seg.vibration = zscore(bandpass(vib, cfg));
  seg.magnetic_peaks = detect_pulses(seg.magnetic, cfg);
  seg.vibration_peaks = detect_pulses(seg.vibration, cfg);
  const double cv = interval_cv(seg.magnetic_peaks);
  if (cv > cfg.max_interval_cv) {
    throw DomainError("irregular beat intervals (CV " + std::to_string(cv) + ")");
  }
  std::vector<std::size_t> peaks = seg.magnetic_peaks;
  if (cfg.max_pulses_per_segment > 0) {
    // Cap the number of complete beat windows, not raw peaks.
    const double period = median_interval(peaks);
    const double last = static_cast<double>(seg.magnetic.samples.size() - 1);
    std::vector<std::size_t> complete;
    for (std::size_t p : peaks) {
      const double at = static_cast<double>(p);
      if (at - 0.3 * period >= 0.0 && at + 0.7 * period <= last) complete.push_back(p);
    }
    if (complete.size() > static_cast<std::size_t>(cfg.max_pulses_per_segment)) {
      complete.resize(static_cast<std::size_t>(cfg.max_pulses_per_segment));
    }
    peaks = std::move(complete);
  }
  seg.magnetic_template = average_pulse(seg.magnetic, peaks, cfg.template_points);
  seg.vibration_template = average_pulse(seg.vibration, peaks, cfg.template_points);
  // Each beat is normalized on its own before pairing, like the templates.
  const auto wm = beat_windows(seg.magnetic, peaks, cfg.template_points);
  const auto wv = beat_windows(seg.vibration, peaks, cfg.template_points);
  for (std::size_t b = 0; b < wm.size(); ++b) {
    const auto zm = zscore(std::span<const double>(wm[b]));
    const auto zv = zscore(std::span<const double>(wv[b]));
    seg.beat_magnetic.insert(seg.beat_magnetic.end(), zm.begin(), zm.end());
    seg.beat_vibration.insert(seg.beat_vibration.end(), zv.begin(), zv.end());
  }
  return seg;
}

PulseTemplate mean_template(const std::vector<SegmentResult>& segs, bool magnetic) {
  const auto pick = [magnetic](const SegmentResult& s) -> const PulseTemplate& {
    return magnetic ? s.magnetic_template : s.vibration_template;
  };
  PulseTemplate out;
  out.samples.assign(pick(segs.front()).samples.size(), 0.0);
  double period = 0.0;
  for (const auto& s : segs) {
    const auto& t = pick(s);
    for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] += t.samples[k];
    out.n_pulses += t.n_pulses;
    period += t.period_s;
  }
  out.period_s = period / static_cast<double>(segs.size());
  out.samples = zscore(std::span<const double>(out.samples));
  return out;
}

double pooled_rate_bpm(const std::vector<SegmentResult>& segs, bool magnetic, double fs) {
  std::vector<double> intervals;
  for (const auto& s : segs) {
    const auto& p = magnetic ? s.magnetic_peaks : s.vibration_peaks;
    for (std::size_t i = 1; i < p.size(); ++i) intervals.push_back(static_cast<double>(p[i] - p[i - 1]));
  }
  std::sort(intervals.begin(), intervals.end());
  const std::size_t m = intervals.size() / 2;
  const double med = intervals.size() % 2 == 1 ? intervals[m] : 0.5 * (intervals[m - 1] + intervals[m]);
  return 60.0 * fs / med;
}

}  // namespace

PipelineResult run_pipeline(const PulseTrace& magnetic, const PulseTrace& vibration,
                            const PipelineConfig& cfg) {
  magnetic.validate();
  vibration.validate();
  if (magnetic.fs != vibration.fs) throw ConfigError("channels differ in sample rate");
  if (magnetic.samples.size() != vibration.samples.size()) throw ConfigError("channels differ in length");
  PipelineConfig c = cfg;
  c.fs = magnetic.fs;
  c.validate();

  const auto seg_len = static_cast<std::size_t>(std::llround(c.segment_s * c.fs));
  const std::size_t n_seg = seg_len == 0 ? 0 : magnetic.samples.size() / seg_len;
  if (n_seg == 0) {
    throw DomainError("recording shorter than one " + std::to_string(c.segment_s) + " s segment");
  }

  PipelineResult out;
  out.segments.reserve(n_seg);
  for (std::size_t s = 0; s < n_seg; ++s) {
    try {
      out.segments.push_back(process_segment(s, slice(magnetic, s * seg_len, seg_len),
                                             slice(vibration, s * seg_len, seg_len), c));
    } catch (const ConfigError& e) {
      throw ConfigError("segment " + std::to_string(s) + ": " + e.what());
    } catch (const DomainError& e) {
      throw DomainError("segment " + std::to_string(s) + ": " + e.what());
    }
  }

  std::vector<double> trace_m, trace_v, tmpl_m, tmpl_v, beat_m, beat_v;
  std::size_t n_pulses = 0;
  for (const auto& s : out.segments) {
    trace_m.insert(trace_m.end(), s.magnetic.samples.begin(), s.magnetic.samples.end());
    trace_v.insert(trace_v.end(), s.vibration.samples.begin(), s.vibration.samples.end());
    tmpl_m.insert(tmpl_m.end(), s.magnetic_template.samples.begin(), s.magnetic_template.samples.end());
    tmpl_v.insert(tmpl_v.end(), s.vibration_template.samples.begin(), s.vibration_template.samples.end());
    beat_m.insert(beat_m.end(), s.beat_magnetic.begin(), s.beat_magnetic.end());
    beat_v.insert(beat_v.end(), s.beat_vibration.begin(), s.beat_vibration.end());
    n_pulses += s.magnetic_template.n_pulses;
  }
  out.r_trace = pearson(trace_m, trace_v);
  out.r_template = pearson(tmpl_m, tmpl_v);
  out.bland_altman = bland_altman(beat_m, beat_v);
  out.bland_altman.n_pulses = n_pulses;

  out.magnetic_template = mean_template(out.segments, true);
  out.vibration_template = mean_template(out.segments, false);
  out.magnetic_acceleration = second_derivative(out.magnetic_template);
  out.vibration_acceleration = second_derivative(out.vibration_template);
  out.heart_rate_bpm = pooled_rate_bpm(out.segments, true, c.fs);
  out.vibration_heart_rate_bpm = pooled_rate_bpm(out.segments, false, c.fs);
  return out;
}

}  // namespace magpulse::dsp
