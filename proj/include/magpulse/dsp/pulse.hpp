#pragma once

#include "magpulse/dsp/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace magpulse::dsp {

/// (x - mean) / SD with the population SD (divisor n). Throws DomainError on
/// constant input.
std::vector<double> zscore(std::span<const double> x);
PulseTrace zscore(const PulseTrace& trace);

/// Local maxima with prominence >= cfg.min_prominence and spacing >=
/// cfg.min_distance_s; when two candidates are closer, the higher one wins.
/// Indices ascending. Throws DomainError when fewer than two peaks remain.
std::vector<std::size_t> detect_pulses(const PulseTrace& trace, const PipelineConfig& cfg);

/// Topographic prominence of each peak index, in the units of x.
std::vector<double> peak_prominences(std::span<const double> x, std::span<const std::size_t> peaks);

/// Median spacing of consecutive peaks, in samples.
double median_interval(std::span<const std::size_t> peaks);

/// Coefficient of variation of the peak-to-peak intervals.
double interval_cv(std::span<const std::size_t> peaks);

/// Beat windows over [-0.3 T, 0.7 T) around each peak, T the median interval,
/// linearly resampled to `points` samples. Windows crossing the trace ends are
/// dropped.
std::vector<std::vector<double>> beat_windows(const PulseTrace& trace, std::span<const std::size_t> peaks,
                                              int points = 240);

/// Averages the beats around each peak over [-0.3 T, 0.7 T) with T the median
/// interval, each window linearly resampled to `points` samples, then z-scores.
/// Windows crossing the trace ends are dropped. Needs at least five windows.
PulseTemplate average_pulse(const PulseTrace& trace, std::span<const std::size_t> peaks,
                            int points = 240);

/// Second differences scaled by fs^2: central in the interior, four-point
/// one-sided at the ends (exact for cubics). Not normalized.
std::vector<double> second_difference(std::span<const double> x, double fs);

/// Acceleration waveform of a template: second_difference at the template
/// sample rate, then z-scored.
PulseTemplate second_derivative(const PulseTemplate& tmpl);

}  // namespace magpulse::dsp
