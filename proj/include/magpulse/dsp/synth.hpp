#pragma once

// Synthetic two-channel pulse recordings. One latent skin displacement drives
// both channels: the magnetic sensor sees it through a displacement-to-volts
// gain, the vibrometer directly. The vibrometer additionally picks up the tilt
// of the magnet face (gamma L_y - beta L_x) and each channel gets its own noise.

#include "magpulse/dsp/types.hpp"

#include <cstdint>
#include <utility>

namespace magpulse::dsp {

/// Gaussian bump in beat phase units (fraction of one period).
struct Lobe {
  double amplitude = 1.0;
  double center = 0.2;
  double width = 0.05;
};

/// Diastolic run-off: a fast logistic rise at `onset` followed by exponential
/// decay, in beat phase units. It carries most of the beat's low-frequency
/// content, like the slow pressure decay of a real pulse, and keeps the
/// high-pass rebound of slow rhythms small.
struct Runoff {
  double amplitude = 1.6;
  double onset = 0.16;
  double rise = 0.02;
  double decay = 0.6;
};

struct SynthConfig {
  double heart_rate_bpm = 72.0;
  double duration_s = 90.0;
  double fs = 240.0;
  double pulse_amplitude = 50.0e-6;       // m, scales the lobe sum
  Lobe systolic{1.0, 0.18, 0.055};
  Lobe dicrotic{-0.10, 0.36, 0.025};      // negative: the notch
  Lobe diastolic{0.20, 0.42, 0.08};
  Runoff runoff{};
  double respiration_hz = 0.25;
  double respiration_amplitude = 20.0e-6; // m
  double displacement_to_volts = 25.6;    // V/m, about 1 Oe per 50 um at 1.28 mV/Oe
  double pitch_amplitude = 2.0e-3;        // rad, peak magnet pitch per beat
  double roll_amplitude = 0.0;            // rad
  double spot_x = 1.0e-3;                 // vibrometer spot offset from the rotation centre, m
  double spot_y = 0.0;
  double rotation_mixing = 1.0;           // gain on gamma L_y - beta L_x in the vibration channel
  double noise_sd_magnetic = 0.2e-3;      // V
  double noise_sd_vibration = 8.0e-6;     // m
  std::uint64_t seed = 1;

  void validate() const;
  double period_s() const { return 60.0 / heart_rate_bpm; }
};

/// Clean lobe sum at a beat phase (not periodized).
double beat_shape(const SynthConfig& cfg, double phase);

/// Noise-free latent displacement (pulse train plus respiration), metres.
double latent_displacement(const SynthConfig& cfg, double t);

/// Magnetic (volts) and vibration (metres) channels; deterministic in cfg.seed.
std::pair<PulseTrace, PulseTrace> synth_pulse_train(const SynthConfig& cfg);

}  // namespace magpulse::dsp
