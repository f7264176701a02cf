#pragma once

// First-order signal models for the magnet-pair pulse sensor. A pulse reaches
// the sensor as a field change from three sources: rigid displacement of the
// top magnet, rotation of its moment, and a change of tissue susceptibility.
// Each becomes a voltage through sensor_voltage_delta.

#include "magpulse/magnetostatics.hpp"

namespace magpulse {

/// Yaw (about z), pitch (about y), roll (about x), radians.
struct RotationAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  /// Throws DomainError if any angle is non-finite or |angle| >= limit.
  void require_small(double limit = 0.1) const;
  double max_abs() const;
};

/// Laser vibrometer focused on the top face of the movable magnet.
struct VibrometerSpec {
  Vec3 spot{1.0e-3, 0.0, 0.0};  // laser spot relative to the rotation centre, m
  Vec3 beam_axis = Vec3::UnitZ();
};

/// Blood susceptibility relative to water, linear in haematocrit.
struct BloodModel {
  double hct = 0.45;
  double hbo2 = 1.0;
  double dchi_oxy = -2.0e-8;  // fully oxygenated blood minus water
  double dchi_do = 2.7e-7;    // deoxygenated minus oxygenated red cells
  double chi_water = 7.18e-7;

  void validate() const;
};

struct SignalDelta {
  double volts = 0.0;
  Vec3 field_delta = Vec3::Zero();  // A/m
};

/// R = Rz(alpha) * Ry(beta) * Rx(gamma).
Mat3 rotation_matrix(const RotationAngles& angles);

/// Converts world-frame positions to the sensor-centred frame used by the
/// closed-form signals: the magnet position relative to the sensor.
inline Vec3 magnet_offset_from_sensor(const Vec3& magnet_center, const Vec3& sensor_position) {
  return magnet_center - sensor_position;
}

/// S * (s . dH). Every field change becomes a voltage through this.
double sensor_voltage_delta(const SensorSpec& sensor, const Vec3& field_delta);

/// Jacobian dH_i/dr_j of the dipole field at offset r.
Mat3 dipole_field_jacobian(const Vec3& moment, const Vec3& offset);

/// Closed-form response to a small magnet displacement dr, with r the magnet
/// position relative to the sensor:
///   V = (3 m S / 4pi) r^-7 [(x^3 + x y^2 - 4 x z^2) dz + (z^3 + z y^2 - 4 z x^2) dx - 5 x y z dy].
/// Only defined for sensing axis +x and moment along z; other configurations
/// throw ConfigError and should use displacement_signal_numeric.
SignalDelta displacement_signal(const SensorSpec& sensor, const Vec3& moment, const Vec3& r, const Vec3& dr);

/// Far-field limit x >> |y|, |z|: (3 m S / 4pi) dz / x^4.
double displacement_signal_farfield(const SensorSpec& sensor, double moment_magnitude, double x, double dz);

/// Closed-form response to rotating the moment in place, dm = R m - m:
///   V = (3 S / 4pi) r^-5 [(x^2 - r^2/3) dm_x + x y dm_y + x z dm_z].
/// Same configuration restriction as displacement_signal.
SignalDelta rotation_signal(const SensorSpec& sensor, const Vec3& moment, const Vec3& r,
                            const RotationAngles& angles);

/// Far-field, small-angle limit on the x axis: S m beta / (2 pi x^3). |beta| < 0.1.
double rotation_signal_farfield(const SensorSpec& sensor, double moment_magnitude, double x, double beta);

// Generic dipole-model paths for any sensor axis / moment direction: direct
// field differences rather than linearized closed forms.
SignalDelta displacement_signal_numeric(const SensorSpec& sensor, const Vec3& moment, const Vec3& r,
                                        const Vec3& dr);
SignalDelta rotation_signal_numeric(const SensorSpec& sensor, const Vec3& moment, const Vec3& r,
                                    const RotationAngles& angles);

/// Displacement seen along the beam: dz + k . (R L - L).
double vibrometer_reading(const VibrometerSpec& vibrometer, const RotationAngles& angles,
                          double dz_translation);
/// Small-angle form dz + gamma L_y - beta L_x. Requires a +z beam and angles < 0.1 rad.
double vibrometer_reading_small_angle(const VibrometerSpec& vibrometer, const RotationAngles& angles,
                                      double dz_translation);

/// Hct * (dchi_do * (1 - HbO2) + dchi_oxy).
double susceptibility_delta_chi(const BloodModel& blood);

/// Copy of the assembly with the top magnet translated.
MagnetAssembly with_top_shifted(const MagnetAssembly& assembly, const Vec3& shift);
/// Copy of the assembly with the top magnet rotated about the centre of its bottom face.
MagnetAssembly with_top_rotated(const MagnetAssembly& assembly, const RotationAngles& angles);

/// assembly_field(after, p) - assembly_field(before, p) on the finite-cylinder model.
Vec3 numeric_field_delta(const MagnetAssembly& before, const MagnetAssembly& after, const Vec3& p,
                         const QuadratureSpec& quadrature);

}  // namespace magpulse
