#include "magpulse/dsp/pulse.hpp"

#include "magpulse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace magpulse::dsp {

void PulseTrace::validate() const {
  if (!(fs > 0.0) || !std::isfinite(fs)) throw ConfigError("trace sample rate must be > 0");
  if (samples.size() < 2) throw ConfigError("trace needs at least two samples");
  for (double v : samples) {
    if (!std::isfinite(v)) throw ConfigError("trace samples must be finite");
  }
}

void PipelineConfig::validate() const {
  if (!(segment_s > 0.0)) throw ConfigError("segment_s must be > 0");
  if (!(fs > 0.0)) throw ConfigError("fs must be > 0");
  if (!(0.0 < f_lo && f_lo < f_hi && f_hi < 0.5 * fs)) {
    throw ConfigError("band must satisfy 0 < f_lo < f_hi < fs/2");
  }
  if (filter_order < 1) throw ConfigError("filter_order must be >= 1");
  if (template_points < 5) throw ConfigError("template_points must be >= 5");
  if (!(min_prominence > 0.0)) throw ConfigError("min_prominence must be > 0");
  if (!(min_distance_s > 0.0)) throw ConfigError("min_distance_s must be > 0");
  if (!(max_interval_cv > 0.0)) throw ConfigError("max_interval_cv must be > 0");
  if (max_pulses_per_segment < 0) throw ConfigError("max_pulses_per_segment must be >= 0");
}

std::vector<double> zscore(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("zscore needs at least two samples");
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 0.0) || sd <= 1e-14 * std::max(1.0, std::abs(mean))) {
    throw DomainError("zscore: zero variance");
  }
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [&](double v) { return (v - mean) / sd; });
  return out;
}

PulseTrace zscore(const PulseTrace& trace) {
  PulseTrace out = trace;
  out.samples = zscore(std::span<const double>(trace.samples));
  return out;
}

std::vector<double> peak_prominences(std::span<const double> x, std::span<const std::size_t> peaks) {
  std::vector<double> out;
  out.reserve(peaks.size());
  for (std::size_t p : peaks) {
    const double h = x[p];
    double left_min = h;
    for (std::size_t i = p; i-- > 0;) {
      if (x[i] > h) break;
      left_min = std::min(left_min, x[i]);
    }
    double right_min = h;
    for (std::size_t i = p + 1; i < x.size(); ++i) {
      if (x[i] > h) break;
      right_min = std::min(right_min, x[i]);
    }
    out.push_back(h - std::max(left_min, right_min));
  }
  return out;
}

std::vector<std::size_t> detect_pulses(const PulseTrace& trace, const PipelineConfig& cfg) {
  trace.validate();
  cfg.validate();
  const auto& x = trace.samples;
  const std::size_t n = x.size();

  // Local maxima; a flat top reports its middle sample.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i + 1 < n;) {
    if (x[i - 1] < x[i]) {
      std::size_t j = i + 1;
      while (j + 1 < n && x[j] == x[i]) ++j;
      if (x[j] < x[i]) {
        candidates.push_back((i + j - 1) / 2);
      }
      i = j;
    } else {
      ++i;
    }
  }

  const auto prom = peak_prominences(x, candidates);
  std::vector<std::size_t> peaks;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (prom[k] >= cfg.min_prominence) peaks.push_back(candidates[k]);
  }

  const auto min_gap = static_cast<std::size_t>(std::ceil(cfg.min_distance_s * trace.fs));
  std::vector<std::size_t> by_height = peaks;
  std::stable_sort(by_height.begin(), by_height.end(),
                   [&x](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  std::vector<std::size_t> kept;
  for (std::size_t p : by_height) {
    const bool clear = std::none_of(kept.begin(), kept.end(), [&](std::size_t q) {
      return (p > q ? p - q : q - p) < min_gap;
    });
    if (clear) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end());
  if (kept.size() < 2) {
    throw DomainError("detect_pulses: found " + std::to_string(kept.size()) +
                      " peak(s); cannot establish a period");
  }
  return kept;
}

double median_interval(std::span<const std::size_t> peaks) {
  if (peaks.size() < 2) throw DomainError("median_interval needs at least two peaks");
  std::vector<double> d;
  for (std::size_t i = 1; i < peaks.size(); ++i) d.push_back(static_cast<double>(peaks[i] - peaks[i - 1]));
  std::sort(d.begin(), d.end());
  const std::size_t m = d.size() / 2;
  return d.size() % 2 == 1 ? d[m] : 0.5 * (d[m - 1] + d[m]);
}

double interval_cv(std::span<const std::size_t> peaks) {
  if (peaks.size() < 3) return 0.0;
  std::vector<double> d;
  for (std::size_t i = 1; i < peaks.size(); ++i) d.push_back(static_cast<double>(peaks[i] - peaks[i - 1]));
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(d.size())) / mean;
}

std::vector<std::vector<double>> beat_windows(const PulseTrace& trace, std::span<const std::size_t> peaks,
                                              int points) {
  trace.validate();
  if (points < 5) throw ConfigError("beat windows need at least 5 points");
  const double period = median_interval(peaks);
  const auto& x = trace.samples;
  const double last = static_cast<double>(x.size() - 1);

  std::vector<std::vector<double>> out;
  for (std::size_t p : peaks) {
    const double start = static_cast<double>(p) - 0.3 * period;
    const double end = static_cast<double>(p) + 0.7 * period;
    if (start < 0.0 || end > last) continue;
    std::vector<double> w(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
      const double t = start + period * k / points;
      const auto i0 = static_cast<std::size_t>(std::floor(t));
      const double frac = t - static_cast<double>(i0);
      w[static_cast<std::size_t>(k)] = frac == 0.0 ? x[i0] : x[i0] + frac * (x[i0 + 1] - x[i0]);
    }
    out.push_back(std::move(w));
  }
  return out;
}

PulseTemplate average_pulse(const PulseTrace& trace, std::span<const std::size_t> peaks, int points) {
  if (peaks.size() < 5) throw DomainError("average_pulse: need at least 5 peaks");
  const auto windows = beat_windows(trace, peaks, points);
  if (windows.size() < 5) {
    throw DomainError("average_pulse: only " + std::to_string(windows.size()) + " complete beat window(s)");
  }
  std::vector<double> sum(static_cast<std::size_t>(points), 0.0);
  for (const auto& w : windows) {
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += w[k];
  }
  for (double& v : sum) v /= static_cast<double>(windows.size());

  PulseTemplate out;
  out.samples = zscore(std::span<const double>(sum));
  out.n_pulses = windows.size();
  out.period_s = median_interval(peaks) / trace.fs;
  return out;
}

std::vector<double> second_difference(std::span<const double> x, double fs) {
  const std::size_t n = x.size();
  if (n < 5) throw DomainError("second_difference needs at least five samples");
  const double f2 = fs * fs;
  std::vector<double> out(n);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (x[i - 1] - 2.0 * x[i] + x[i + 1]) * f2;
  out[0] = (2.0 * x[0] - 5.0 * x[1] + 4.0 * x[2] - x[3]) * f2;
  out[n - 1] = (2.0 * x[n - 1] - 5.0 * x[n - 2] + 4.0 * x[n - 3] - x[n - 4]) * f2;
  return out;
}

PulseTemplate second_derivative(const PulseTemplate& tmpl) {
  if (!(tmpl.period_s > 0.0)) throw ConfigError("template period must be > 0");
  PulseTemplate out = tmpl;
  const auto d2 = second_difference(tmpl.samples, tmpl.sample_rate());
  out.samples = zscore(std::span<const double>(d2));
  return out;
}

}  // namespace magpulse::dsp
