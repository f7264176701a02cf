#include "magpulse/dsp/butterworth.hpp"

#include "magpulse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace magpulse::dsp {
namespace {

enum class Kind { lowpass, highpass };

std::vector<Biquad> design(Kind kind, int order, double cutoff_hz, double fs) {
  if (order < 1) throw ConfigError("filter order must be >= 1");
  if (!(fs > 0.0) || !(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * fs)) {
    throw ConfigError("cutoff must lie in (0, fs/2)");
  }
  const double k = 2.0 * fs;
  const double wc = k * std::tan(std::numbers::pi * cutoff_hz / fs);
  const double w2 = wc * wc;
  std::vector<Biquad> sections;
  for (int i = 0; i < order / 2; ++i) {
    // Conjugate pole pair on the Butterworth circle: s^2 + a s + wc^2.
    const double theta = std::numbers::pi * (2.0 * i + order + 1.0) / (2.0 * order);
    const double a = -2.0 * wc * std::cos(theta);
    const double d = k * k + a * k + w2;
    Biquad s;
    if (kind == Kind::lowpass) {
      s.b0 = w2 / d;
      s.b1 = 2.0 * w2 / d;
      s.b2 = w2 / d;
    } else {
      s.b0 = k * k / d;
      s.b1 = -2.0 * k * k / d;
      s.b2 = k * k / d;
    }
    s.a1 = (2.0 * w2 - 2.0 * k * k) / d;
    s.a2 = (k * k - a * k + w2) / d;
    sections.push_back(s);
  }
  if (order % 2 == 1) {
    const double d = k + wc;
    Biquad s;
    if (kind == Kind::lowpass) {
      s.b0 = wc / d;
      s.b1 = wc / d;
    } else {
      s.b0 = k / d;
      s.b1 = -k / d;
    }
    s.a1 = (wc - k) / d;
    sections.push_back(s);
  }
  return sections;
}

// DF2T state that holds a constant input c at steady state for each section.
void steady_state(std::span<const Biquad> sections, double c, std::vector<double>& s1,
                  std::vector<double>& s2) {
  double in = c;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const Biquad& q = sections[i];
    const double gain = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
    const double out = gain * in;
    s2[i] = q.b2 * in - q.a2 * out;
    s1[i] = q.b1 * in - q.a1 * out + s2[i];
    in = out;
  }
}

void run_pass(std::span<const Biquad> sections, std::vector<double>& x, bool steady_start) {
  std::vector<double> s1(sections.size(), 0.0), s2(sections.size(), 0.0);
  if (steady_start && !x.empty()) steady_state(sections, x.front(), s1, s2);
  for (double& v : x) {
    double in = v;
    for (std::size_t i = 0; i < sections.size(); ++i) {
      const Biquad& q = sections[i];
      const double out = q.b0 * in + s1[i];
      s1[i] = q.b1 * in - q.a1 * out + s2[i];
      s2[i] = q.b2 * in - q.a2 * out;
      in = out;
    }
    v = in;
  }
}

}  // namespace

std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double fs) {
  return design(Kind::lowpass, order, cutoff_hz, fs);
}

std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double fs) {
  return design(Kind::highpass, order, cutoff_hz, fs);
}

std::vector<Biquad> butterworth_bandpass(const PipelineConfig& cfg, double fs) {
  PipelineConfig c = cfg;
  c.fs = fs;
  c.validate();
  auto sections = butterworth_highpass(cfg.filter_order, cfg.f_lo, fs);
  const auto low = butterworth_lowpass(cfg.filter_order, cfg.f_hi, fs);
  sections.insert(sections.end(), low.begin(), low.end());
  return sections;
}

std::complex<double> frequency_response(std::span<const Biquad> sections, double f_hz, double fs) {
  const std::complex<double> zi = std::polar(1.0, -2.0 * std::numbers::pi * f_hz / fs);  // z^-1
  std::complex<double> h = 1.0;
  for (const auto& q : sections) {
    h *= (q.b0 + q.b1 * zi + q.b2 * zi * zi) / (1.0 + q.a1 * zi + q.a2 * zi * zi);
  }
  return h;
}

std::vector<double> filter_causal(std::span<const Biquad> sections, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  run_pass(sections, y, false);
  return y;
}

namespace {

std::vector<double> forward_backward(std::span<const Biquad> sections, std::span<const double> x,
                                     std::size_t pad_length) {
  const std::size_t n = x.size();
  const std::size_t pad = std::min(pad_length, n - 1);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(x[n - 1 - i]);

  run_pass(sections, ext, true);
  std::reverse(ext.begin(), ext.end());
  run_pass(sections, ext, true);
  std::reverse(ext.begin(), ext.end());
  return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace

std::vector<double> filtfilt(std::span<const Biquad> sections, std::span<const double> x,
                             std::size_t pad_length) {
  if (x.size() < 2) throw DomainError("filtfilt needs at least two samples");
  // Forward-then-backward is not exactly time-reversal symmetric because the
  // first pass sees the start of the record. Averaging with the mirrored run
  // makes reversing the input reverse the output exactly.
  std::vector<double> y = forward_backward(sections, x, pad_length);
  std::vector<double> rev(x.rbegin(), x.rend());
  const std::vector<double> y_rev = forward_backward(sections, rev, pad_length);
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * (y[i] + y_rev[n - 1 - i]);
  return y;
}

PulseTrace bandpass(const PulseTrace& trace, const PipelineConfig& cfg) {
  trace.validate();
  const auto sections = butterworth_bandpass(cfg, trace.fs);
  const std::size_t band_order = 2 * static_cast<std::size_t>(cfg.filter_order);
  if (trace.samples.size() <= 6 * band_order) {
    throw DomainError("bandpass: trace of " + std::to_string(trace.samples.size()) +
                      " samples is too short for an order-" + std::to_string(band_order) + " filter");
  }
  // Pad by several time constants of the high-pass edge.
  const auto pad = static_cast<std::size_t>(std::ceil(6.0 * trace.fs / cfg.f_lo));
  PulseTrace out = trace;
  out.samples = filtfilt(sections, trace.samples, pad);
  return out;
}

}  // namespace magpulse::dsp
