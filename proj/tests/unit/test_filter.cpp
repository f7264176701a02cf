#include "magpulse/dsp/butterworth.hpp"
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

constexpr double kFs = 240.0;

// Butterworth magnitude after the bilinear map with prewarped edges.
double lowpass_gain(int n, double fc, double f) {
  const double w = std::tan(std::numbers::pi * f / kFs) / std::tan(std::numbers::pi * fc / kFs);
  return 1.0 / std::sqrt(1.0 + std::pow(w, 2 * n));
}
double highpass_gain(int n, double fc, double f) {
  const double w = std::tan(std::numbers::pi * fc / kFs) / std::tan(std::numbers::pi * f / kFs);
  return 1.0 / std::sqrt(1.0 + std::pow(w, 2 * n));
}

std::vector<double> sine(double f, double seconds, double phase = 0.0) {
  std::vector<double> x(static_cast<std::size_t>(seconds * kFs));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * f * i / kFs + phase);
  return x;
}

PulseTrace trace(std::vector<double> x) { return PulseTrace{std::move(x), kFs, Channel::magnetic}; }

// Peak amplitude over the middle half, away from the edges.
double mid_amplitude(const std::vector<double>& y) {
  double peak = 0.0;
  for (std::size_t i = y.size() / 4; i < 3 * y.size() / 4; ++i) peak = std::max(peak, std::abs(y[i]));
  return peak;
}

int xcorr_lag(const std::vector<double>& a, const std::vector<double>& b, int max_lag) {
  int best = 0;
  double best_v = -1e300;
  const int n = static_cast<int>(a.size());
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    double s = 0.0;
    for (int i = n / 4; i < 3 * n / 4; ++i) s += a[i] * b[i + lag];
    if (s > best_v) {
      best_v = s;
      best = lag;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("designs match the prewarped Butterworth magnitude") {
  for (int order : {1, 2, 3, 4, 6}) {
    const auto lp = butterworth_lowpass(order, 10.0, kFs);
    const auto hp = butterworth_highpass(order, 0.8, kFs);
    CHECK(lp.size() == static_cast<std::size_t>((order + 1) / 2));
    for (double f : {0.05, 0.25, 0.8, 2.0, 5.0, 10.0, 30.0, 100.0}) {
      CHECK(std::abs(frequency_response(lp, f, kFs)) == doctest::Approx(lowpass_gain(order, 10.0, f)).epsilon(1e-9));
      CHECK(std::abs(frequency_response(hp, f, kFs)) == doctest::Approx(highpass_gain(order, 0.8, f)).epsilon(1e-9));
    }
    CHECK(std::abs(frequency_response(lp, 0.0, kFs)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(frequency_response(hp, 0.0, kFs)) < 1e-9);
    CHECK(std::abs(frequency_response(lp, 10.0, kFs)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(butterworth_lowpass(4, 130.0, kFs), ConfigError);
  CHECK_THROWS_AS(butterworth_highpass(0, 1.0, kFs), ConfigError);
}

TEST_CASE("causal filtering reaches the designed steady state") {
  const auto bp = butterworth_bandpass(PipelineConfig{}, kFs);
  const auto y = filter_causal(bp, sine(3.0, 20.0));
  const double gain = std::abs(frequency_response(bp, 3.0, kFs));
  CHECK(mid_amplitude(y) == doctest::Approx(gain).epsilon(1e-3));
}

TEST_CASE("band-pass contract at 240 Hz") {
  const PipelineConfig cfg;
  // Forward-backward squares the single-pass magnitude.
  auto pass = [&](double f) { return mid_amplitude(bandpass(trace(sine(f, 60.0, 0.3)), cfg).samples); };
  const double at_2 = pass(2.0);
  CHECK(at_2 >= 0.95);
  CHECK(at_2 <= 1.05);
  const double resp = pass(0.25);
  CHECK(resp <= 0.1);
  CHECK(20.0 * std::log10(resp) <= -20.0);
  for (double f : {1.0, 2.0, 4.0, 8.0}) {
    const double expect = std::pow(highpass_gain(4, 0.8, f) * lowpass_gain(4, 10.0, f), 2);
    CHECK(pass(f) == doctest::Approx(expect).epsilon(2e-3));
  }
  // The passband is flat to 5% only between about 1.2 and 6.7 Hz.
  CHECK(pass(1.0) < 0.95);
  CHECK(pass(8.0) < 0.95);

  std::vector<double> dc(240 * 40, 3.0);
  CHECK(mid_amplitude(bandpass(trace(dc), cfg).samples) < 0.03);
}

TEST_CASE("zero phase") {
  const PipelineConfig cfg;
  for (double f : {1.5, 2.0, 5.0}) {
    const auto x = sine(f, 30.0);
    const auto y = bandpass(trace(x), cfg).samples;
    CHECK(xcorr_lag(x, y, 30) == 0);
  }
  // A causal single pass does lag.
  const auto x = sine(2.0, 30.0);
  CHECK(xcorr_lag(x, filter_causal(butterworth_bandpass(cfg, kFs), x), 60) != 0);
}

TEST_CASE("filter linearity") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> x(240 * 30), y(x.size()), z(x.size());
  for (auto& v : x) v = n(rng);
  for (auto& v : y) v = n(rng);
  const double a = 2.5, b = -0.75;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = a * x[i] + b * y[i];
  const PipelineConfig cfg;
  const auto fx = bandpass(trace(x), cfg).samples, fy = bandpass(trace(y), cfg).samples;
  const auto fz = bandpass(trace(z), cfg).samples;
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < fz.size(); ++i) {
    err = std::max(err, std::abs(fz[i] - (a * fx[i] + b * fy[i])));
    scale = std::max(scale, std::abs(fz[i]));
  }
  CHECK(err <= 1e-10 * scale);
}

TEST_CASE("palindromic input gives palindromic output") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  for (std::size_t len : {2001u, 7200u}) {
    std::vector<double> x(len);
    for (std::size_t i = 0; i < (len + 1) / 2; ++i) x[i] = x[len - 1 - i] = n(rng) + std::sin(0.01 * i);
    const auto y = bandpass(trace(x), PipelineConfig{}).samples;
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      err = std::max(err, std::abs(y[i] - y[len - 1 - i]));
      scale = std::max(scale, std::abs(y[i]));
    }
    CHECK(err <= 1e-10 * scale);
  }
}

TEST_CASE("short traces are rejected") {
  const PipelineConfig cfg;
  CHECK_THROWS_AS(bandpass(trace(std::vector<double>(48, 1.0)), cfg), DomainError);
  CHECK_NOTHROW(bandpass(trace(sine(2.0, 1.0)), cfg));
}
