#include "magpulse/dsp/synth.hpp"

#include "magpulse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace magpulse::dsp {
namespace {

double gaussian(const Lobe& lobe, double phase) {
  const double u = (phase - lobe.center) / lobe.width;
  return lobe.amplitude * std::exp(-0.5 * u * u);
}

// Sums a per-beat bump over the beats whose support reaches t. The run-off
// tail needs several past beats (1.6 exp(-8 / 0.6) ~ 3e-6).
template <typename Shape>
double periodic_sum(double t, double period, Shape&& shape) {
  const auto k0 = static_cast<long>(std::floor(t / period));
  double v = 0.0;
  for (long k = k0 - 8; k <= k0 + 2; ++k) v += shape(t / period - static_cast<double>(k));
  return v;
}

}  // namespace

void SynthConfig::validate() const {
  if (!(heart_rate_bpm >= 30.0 && heart_rate_bpm <= 180.0)) {
    throw ConfigError("heart_rate_bpm must lie in [30, 180]");
  }
  if (!(duration_s > 0.0)) throw ConfigError("duration_s must be > 0");
  if (!(fs > 0.0)) throw ConfigError("fs must be > 0");
  for (const Lobe* l : {&systolic, &dicrotic, &diastolic}) {
    if (!(l->center > 0.0 && l->center < 1.0)) throw ConfigError("lobe centers must lie in (0, 1)");
    if (!(l->width > 0.0)) throw ConfigError("lobe widths must be > 0");
  }
  if (!(runoff.onset > 0.0 && runoff.onset < 1.0) || !(runoff.rise > 0.0) || !(runoff.decay > 0.0)) {
    throw ConfigError("runoff needs onset in (0, 1) and positive rise and decay");
  }
  if (!(noise_sd_magnetic >= 0.0) || !(noise_sd_vibration >= 0.0)) {
    throw ConfigError("noise SDs must be >= 0");
  }
  if (!(respiration_hz >= 0.0)) throw ConfigError("respiration_hz must be >= 0");
}

double beat_shape(const SynthConfig& cfg, double phase) {
  const Runoff& r = cfg.runoff;
  const double after = phase - r.onset;
  const double runoff = r.amplitude / (1.0 + std::exp(-after / r.rise)) * std::exp(-std::max(after, 0.0) / r.decay);
  return gaussian(cfg.systolic, phase) + gaussian(cfg.dicrotic, phase) + gaussian(cfg.diastolic, phase) + runoff;
}

double latent_displacement(const SynthConfig& cfg, double t) {
  const double pulse = periodic_sum(t, cfg.period_s(), [&](double ph) { return beat_shape(cfg, ph); });
  return cfg.pulse_amplitude * pulse +
         cfg.respiration_amplitude * std::sin(2.0 * std::numbers::pi * cfg.respiration_hz * t);
}

std::pair<PulseTrace, PulseTrace> synth_pulse_train(const SynthConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.fs));
  if (n < 2) throw ConfigError("synth: duration too short for the sample rate");

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  PulseTrace mag{std::vector<double>(n), cfg.fs, Channel::magnetic};
  PulseTrace vib{std::vector<double>(n), cfg.fs, Channel::vibration};
  const Lobe tilt{1.0, cfg.diastolic.center, cfg.diastolic.width};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / cfg.fs;
    const double d = latent_displacement(cfg, t);
    // Tilt follows the diastolic lobe: pressure drop after systole rocks the magnet.
    const double w = periodic_sum(t, cfg.period_s(), [&](double ph) { return gaussian(tilt, ph); });
    const double beta = cfg.pitch_amplitude * w;
    const double gamma = cfg.roll_amplitude * w;
    const double tilt_lz = gamma * cfg.spot_y - beta * cfg.spot_x;

    const double noise_m = unit(rng);
    const double noise_v = unit(rng);
    mag.samples[i] = cfg.displacement_to_volts * d + cfg.noise_sd_magnetic * noise_m;
    vib.samples[i] = d + cfg.rotation_mixing * tilt_lz + cfg.noise_sd_vibration * noise_v;
  }
  return {std::move(mag), std::move(vib)};
}

}  // namespace magpulse::dsp
