#pragma once

#include "magpulse/dsp/types.hpp"

#include <complex>
#include <span>
#include <vector>

namespace magpulse::dsp {

/// Direct-form II transposed second-order section, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// Bilinear-transform Butterworth designs with prewarped cutoffs. Odd orders
// end in a first-order section (b2 = a2 = 0).
std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double fs);
std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double fs);
/// High-pass at f_lo cascaded with low-pass at f_hi, each of cfg.filter_order.
std::vector<Biquad> butterworth_bandpass(const PipelineConfig& cfg, double fs);

/// H(e^{j 2 pi f / fs}) of the cascade.
std::complex<double> frequency_response(std::span<const Biquad> sections, double f_hz, double fs);

/// Single causal pass with zero initial state.
std::vector<double> filter_causal(std::span<const Biquad> sections, std::span<const double> x);

/// Zero-phase forward-backward filtering. The input is extended at both ends by
/// mirror reflection (odd reflection turns a beat at the edge into an inverted
/// beat that rings through the high-pass) and each pass starts from the steady state of its first
/// sample, so edge transients are small. The result is averaged with the run on
/// the reversed input, which makes it exactly time-reversal symmetric.
/// Effective magnitude response is |H|^2.
std::vector<double> filtfilt(std::span<const Biquad> sections, std::span<const double> x,
                             std::size_t pad_length);

/// Band-pass of a trace with the configured Butterworth design, forward-backward.
/// Throws DomainError if the trace is shorter than 6x the band-pass order.
PulseTrace bandpass(const PulseTrace& trace, const PipelineConfig& cfg);

}  // namespace magpulse::dsp
