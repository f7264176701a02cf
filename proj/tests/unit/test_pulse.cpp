#include "magpulse/dsp/butterworth.hpp"
#include "magpulse/dsp/pulse.hpp"
#include "magpulse/dsp/statistics.hpp"
#include "magpulse/dsp/synth.hpp"
#include "magpulse/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace magpulse;
using namespace magpulse::dsp;

namespace {

SynthConfig clean(double bpm, double seconds) {
  SynthConfig c;
  c.heart_rate_bpm = bpm;
  c.duration_s = seconds;
  c.noise_sd_magnetic = c.noise_sd_vibration = 0.0;
  c.respiration_amplitude = 0.0;
  c.rotation_mixing = 0.0;
  return c;
}

PulseTrace processed(const PulseTrace& t) { return zscore(bandpass(t, PipelineConfig{})); }

double sd_population(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / x.size());
}

}  // namespace

TEST_CASE("zscore") {
  const std::vector<double> x{1.0, 2.0, 3.0};
  const auto z = zscore(x);
  CHECK(z[0] == doctest::Approx(-1.2247448714).epsilon(1e-9));
  CHECK(z[1] == doctest::Approx(0.0));
  CHECK(z[2] == doctest::Approx(1.2247448714).epsilon(1e-9));
  CHECK(std::abs(mean(z)) < 1e-15);
  CHECK(sd_population(z) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(3.0, 2.0);
  std::vector<double> y(500);
  for (auto& v : y) v = n(rng);
  const auto zy = zscore(y);
  const auto zz = zscore(zy);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(zz[i] - zy[i]) < 1e-12);
  for (double a : {3.5, -0.2}) {
    std::vector<double> t(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) t[i] = a * y[i] + 7.0;
    const auto zt = zscore(t);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(zt[i] == doctest::Approx((a > 0 ? 1 : -1) * zy[i]).epsilon(1e-10));
  }
  CHECK_THROWS_AS(zscore(std::vector<double>(10, 2.0)), DomainError);
}

TEST_CASE("peak detection on clean 60 bpm") {
  const auto [mag, vib] = synth_pulse_train(clean(60.0, 30.0));
  const auto z = processed(mag);
  const auto peaks = detect_pulses(z, PipelineConfig{});
  CHECK(peaks.size() >= 29u);
  CHECK(peaks.size() <= 31u);
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    CHECK(peaks[i] > peaks[i - 1]);
    CHECK((peaks[i] - peaks[i - 1]) / z.fs == doctest::Approx(1.0).epsilon(0.02));
  }
  // Prominence is in SD units, so amplitude does not matter.
  PulseTrace doubled = mag;
  for (auto& v : doubled.samples) v *= 2.0;
  CHECK(detect_pulses(processed(doubled), PipelineConfig{}) == peaks);
  for (double p : peak_prominences(z.samples, peaks)) CHECK(p >= 0.5);
}

TEST_CASE("peak count across heart rates") {
  for (double bpm : {45.0, 60.0, 72.0, 100.0, 150.0}) {
    const double seconds = 30.0;
    const auto [mag, vib] = synth_pulse_train(clean(bpm, seconds));
    const auto peaks = detect_pulses(processed(mag), PipelineConfig{});
    const double expect = std::floor(seconds * bpm / 60.0);
    INFO("bpm = " << bpm);
    CHECK(std::abs(static_cast<double>(peaks.size()) - expect) <= 1.0);
    CHECK(interval_cv(peaks) < 0.05);
    CHECK(60.0 * mag.fs / median_interval(peaks) == doctest::Approx(bpm).epsilon(0.01));
  }
}

TEST_CASE("peak detection respects distance and prominence") {
  // Two bumps 0.2 s apart: only the higher one survives the 0.33 s spacing.
  std::vector<double> x(2400, 0.0);
  auto bump = [&](double centre, double height) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += height * std::exp(-std::pow((i - centre) / 6.0, 2));
  };
  bump(600, 1.0);
  bump(648, 2.0);
  bump(1500, 1.5);
  bump(1800, 0.3);
  PipelineConfig cfg;
  const auto peaks = detect_pulses(PulseTrace{x, 240.0, Channel::magnetic}, cfg);
  REQUIRE(peaks.size() == 2u);
  CHECK(peaks[0] == 648u);
  CHECK(peaks[1] == 1500u);

  std::vector<double> single(1000, 0.0);
  single[500] = 1.0;
  CHECK_THROWS_AS(detect_pulses(PulseTrace{single, 240.0, Channel::magnetic}, cfg), DomainError);
}

TEST_CASE("pure noise does not yield a regular period") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);
  PulseTrace t{std::vector<double>(240 * 30), 240.0, Channel::magnetic};
  for (auto& v : t.samples) v = n(rng);
  bool rejected = false;
  try {
    const auto peaks = detect_pulses(processed(t), PipelineConfig{});
    rejected = interval_cv(peaks) > PipelineConfig{}.max_interval_cv;
  } catch (const DomainError&) {
    rejected = true;
  }
  CHECK(rejected);
}

TEST_CASE("averaging identical beats returns the beat") {
  // Period of exactly 240 samples, so the 240-point window hits sample instants.
  std::vector<double> beat(240);
  for (std::size_t k = 0; k < beat.size(); ++k) {
    const double ph = k / 240.0;
    beat[k] = std::exp(-std::pow((ph - 0.3) / 0.06, 2)) + 0.3 * std::exp(-std::pow((ph - 0.6) / 0.08, 2));
  }
  PulseTrace t{{}, 240.0, Channel::magnetic};
  for (int rep = 0; rep < 12; ++rep) t.samples.insert(t.samples.end(), beat.begin(), beat.end());
  std::vector<std::size_t> peaks;
  for (int rep = 0; rep < 12; ++rep) peaks.push_back(rep * 240 + 72);
  const auto tmpl = average_pulse(t, peaks, 240);
  CHECK(tmpl.n_pulses == 11u);  // the last window runs past the end
  CHECK(tmpl.period_s == doctest::Approx(1.0));
  const auto expect = zscore(beat);
  REQUIRE(tmpl.samples.size() == 240u);
  for (std::size_t k = 0; k < 240; ++k) CHECK(std::abs(tmpl.samples[k] - expect[k]) < 1e-9);
  CHECK(std::abs(mean(tmpl.samples)) < 1e-9);
  CHECK(sd_population(tmpl.samples) == doctest::Approx(1.0).epsilon(1e-9));

  const std::vector<std::size_t> few(peaks.begin(), peaks.begin() + 4);
  CHECK_THROWS_AS(average_pulse(t, few, 240), DomainError);
}

TEST_CASE("averaging beats noise down") {
  auto cfg = clean(72.0, 30.0);
  const auto [ref_mag, ref_vib] = synth_pulse_train(cfg);
  cfg.noise_sd_magnetic = 0.2 * 25.6 * cfg.pulse_amplitude;  // 20% of the beat amplitude
  cfg.seed = 12;
  const auto [mag, vib] = synth_pulse_train(cfg);
  const auto clean_z = processed(ref_mag);
  const auto peaks = detect_pulses(clean_z, PipelineConfig{});
  const auto truth = average_pulse(clean_z, peaks, 240);
  const auto noisy = processed(mag);
  const auto tmpl = average_pulse(noisy, peaks, 240);
  const double r_template = pearson(tmpl.samples, truth.samples);
  const std::size_t len = static_cast<std::size_t>(truth.period_s * mag.fs);
  for (std::size_t i = 1; i + 1 < peaks.size(); ++i) {
    const std::size_t start = peaks[i] - static_cast<std::size_t>(0.3 * len);
    if (start + len > noisy.samples.size()) continue;
    const std::vector<double> one(noisy.samples.begin() + start, noisy.samples.begin() + start + len);
    const std::vector<double> ref(clean_z.samples.begin() + start, clean_z.samples.begin() + start + len);
    CHECK(r_template > pearson(one, ref));
  }
}

TEST_CASE("second difference") {
  const double fs = 50.0, a = 3.0;
  std::vector<double> q(20);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double t = i / fs;
    q[i] = a * t * t - 2.0 * t + 1.0;
  }
  for (double v : second_difference(q, fs)) CHECK(v == doctest::Approx(2.0 * a).epsilon(1e-8));
  std::vector<double> c(20);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double t = i / fs;
    c[i] = t * t * t;
  }
  const auto dc = second_difference(c, fs);
  CHECK(dc.front() == doctest::Approx(0.0).scale(1.0));
  CHECK(dc.back() == doctest::Approx(6.0 * (c.size() - 1) / fs).epsilon(1e-8));

  std::vector<double> s(240);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sin(2.0 * std::numbers::pi * 2.0 * i / 240.0);
  CHECK(pearson(second_difference(s, 240.0), s) < -0.9999);
}

TEST_CASE("acceleration waveform brackets the systolic peak") {
  const auto [mag, vib] = synth_pulse_train(clean(72.0, 30.0));
  const auto z = processed(mag);
  const auto tmpl = average_pulse(z, detect_pulses(z, PipelineConfig{}), 240);
  const auto acc = second_derivative(tmpl);
  REQUIRE(acc.samples.size() == tmpl.samples.size());
  CHECK(std::abs(mean(acc.samples)) < 1e-9);
  CHECK(sd_population(acc.samples) == doctest::Approx(1.0).epsilon(1e-9));
  const auto peak = static_cast<std::size_t>(
      std::max_element(tmpl.samples.begin(), tmpl.samples.end()) - tmpl.samples.begin());
  CHECK(acc.samples[peak] < 0.0);
  std::size_t before = peak, after = peak;
  while (before > 0 && acc.samples[before] < 0.0) --before;
  while (after + 1 < acc.samples.size() && acc.samples[after] < 0.0) ++after;
  CHECK(acc.samples[before] >= 0.0);
  CHECK(acc.samples[after] >= 0.0);
  CHECK(before < peak);
  CHECK(after > peak);
}
