#include "magpulse/perturbation.hpp"

#include "magpulse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace magpulse {
namespace {

constexpr double kInvFourPi = 1.0 / (4.0 * std::numbers::pi);

// Closed forms assume s = +x and m along z in the sensor-centred frame.
double closed_form_moment(const SensorSpec& sensor, const Vec3& moment, const Vec3& r) {
  sensor.validate();
  if ((sensor.axis - Vec3::UnitX()).norm() > 1e-9) {
    throw ConfigError("closed-form signal needs sensing axis +x; use the numeric dipole path");
  }
  const double m = moment.norm();
  if (!(m > 0.0) || std::hypot(moment.x(), moment.y()) > 1e-9 * m) {
    throw ConfigError("closed-form signal needs a moment along z; use the numeric dipole path");
  }
  if (!(r.squaredNorm() > 0.0)) throw DomainError("sensor coincides with the dipole");
  return moment.z();
}

}  // namespace

void RotationAngles::require_small(double limit) const {
  for (double a : {alpha, beta, gamma}) {
    if (!std::isfinite(a) || !(std::abs(a) < limit)) {
      throw DomainError("small-angle form needs |angle| < " + std::to_string(limit) + " rad");
    }
  }
}

double RotationAngles::max_abs() const {
  return std::max({std::abs(alpha), std::abs(beta), std::abs(gamma)});
}

void BloodModel::validate() const {
  if (!(hct >= 0.0 && hct <= 1.0)) throw ConfigError("Hct must lie in [0, 1]");
  if (!(hbo2 >= 0.0 && hbo2 <= 1.0)) throw ConfigError("HbO2 must lie in [0, 1]");
  if (!std::isfinite(dchi_oxy) || !std::isfinite(dchi_do) || !std::isfinite(chi_water)) {
    throw ConfigError("susceptibilities must be finite");
  }
}

Mat3 rotation_matrix(const RotationAngles& angles) {
  const double ca = std::cos(angles.alpha), sa = std::sin(angles.alpha);
  const double cb = std::cos(angles.beta), sb = std::sin(angles.beta);
  const double cg = std::cos(angles.gamma), sg = std::sin(angles.gamma);
  Mat3 rz, ry, rx;
  rz << ca, -sa, 0.0,
        sa,  ca, 0.0,
        0.0, 0.0, 1.0;
  ry << cb, 0.0, sb,
        0.0, 1.0, 0.0,
        -sb, 0.0, cb;
  rx << 1.0, 0.0, 0.0,
        0.0, cg, -sg,
        0.0, sg,  cg;
  return rz * ry * rx;
}

double sensor_voltage_delta(const SensorSpec& sensor, const Vec3& field_delta) {
  return sensor.sensitivity * sensor.axis.dot(field_delta);
}

Mat3 dipole_field_jacobian(const Vec3& moment, const Vec3& offset) {
  const double r2 = offset.squaredNorm();
  if (!(r2 > 0.0)) throw DomainError("dipole_field_jacobian: singular at the dipole position");
  const double r = std::sqrt(r2);
  const double inv_r5 = 1.0 / (r2 * r2 * r);
  const double inv_r7 = inv_r5 / r2;
  const double mr = moment.dot(offset);
  Mat3 j = 3.0 * mr * inv_r5 * Mat3::Identity() + 3.0 * inv_r5 * (offset * moment.transpose()) +
           3.0 * inv_r5 * (moment * offset.transpose()) - 15.0 * mr * inv_r7 * (offset * offset.transpose());
  return kInvFourPi * j;
}

SignalDelta displacement_signal(const SensorSpec& sensor, const Vec3& moment, const Vec3& r, const Vec3& dr) {
  const double m = closed_form_moment(sensor, moment, r);
  const double x = r.x(), y = r.y(), z = r.z();
  const double r2 = r.squaredNorm();
  const double inv_r7 = 1.0 / (r2 * r2 * r2 * std::sqrt(r2));
  const double bracket = (x * x * x + x * y * y - 4.0 * x * z * z) * dr.z() +
                         (z * z * z + z * y * y - 4.0 * z * x * x) * dr.x() - 5.0 * x * y * z * dr.y();
  const double dhx = 3.0 * m * kInvFourPi * inv_r7 * bracket;

  SignalDelta out;
  out.field_delta = dipole_field_jacobian(moment, r) * dr;
  out.field_delta.x() = dhx;
  out.volts = sensor.sensitivity * dhx;
  return out;
}

double displacement_signal_farfield(const SensorSpec& sensor, double moment_magnitude, double x, double dz) {
  if (!(x > 0.0)) throw DomainError("far-field displacement signal needs x > 0");
  return 3.0 * moment_magnitude * sensor.sensitivity * kInvFourPi * dz / (x * x * x * x);
}

SignalDelta rotation_signal(const SensorSpec& sensor, const Vec3& moment, const Vec3& r,
                            const RotationAngles& angles) {
  closed_form_moment(sensor, moment, r);
  const Vec3 dm = rotation_matrix(angles) * moment - moment;
  const double x = r.x(), y = r.y(), z = r.z();
  const double r2 = r.squaredNorm();
  const double inv_r5 = 1.0 / (r2 * r2 * std::sqrt(r2));
  const double bracket = (x * x - r2 / 3.0) * dm.x() + x * y * dm.y() + x * z * dm.z();
  const double dhx = 3.0 * kInvFourPi * inv_r5 * bracket;

  SignalDelta out;
  out.field_delta = dipole_field(dm, r);
  out.field_delta.x() = dhx;
  out.volts = sensor.sensitivity * dhx;
  return out;
}

double rotation_signal_farfield(const SensorSpec& sensor, double moment_magnitude, double x, double beta) {
  if (!(x > 0.0)) throw DomainError("far-field rotation signal needs x > 0");
  RotationAngles{0.0, beta, 0.0}.require_small();
  return sensor.sensitivity * moment_magnitude * beta / (2.0 * std::numbers::pi * x * x * x);
}

SignalDelta displacement_signal_numeric(const SensorSpec& sensor, const Vec3& moment, const Vec3& r,
                                        const Vec3& dr) {
  SignalDelta out;
  out.field_delta = dipole_field(moment, r + dr) - dipole_field(moment, r);
  out.volts = sensor_voltage_delta(sensor, out.field_delta);
  return out;
}

SignalDelta rotation_signal_numeric(const SensorSpec& sensor, const Vec3& moment, const Vec3& r,
                                    const RotationAngles& angles) {
  SignalDelta out;
  out.field_delta = dipole_field(rotation_matrix(angles) * moment, r) - dipole_field(moment, r);
  out.volts = sensor_voltage_delta(sensor, out.field_delta);
  return out;
}

double vibrometer_reading(const VibrometerSpec& vibrometer, const RotationAngles& angles,
                          double dz_translation) {
  const Vec3& spot = vibrometer.spot;
  return dz_translation + vibrometer.beam_axis.dot(rotation_matrix(angles) * spot - spot);
}

double vibrometer_reading_small_angle(const VibrometerSpec& vibrometer, const RotationAngles& angles,
                                      double dz_translation) {
  if ((vibrometer.beam_axis - Vec3::UnitZ()).norm() > 1e-12) {
    throw ConfigError("small-angle vibrometer form assumes a beam along +z");
  }
  angles.require_small();
  return dz_translation + angles.gamma * vibrometer.spot.y() - angles.beta * vibrometer.spot.x();
}

double susceptibility_delta_chi(const BloodModel& blood) {
  blood.validate();
  return blood.hct * (blood.dchi_do * (1.0 - blood.hbo2) + blood.dchi_oxy);
}

MagnetAssembly with_top_shifted(const MagnetAssembly& assembly, const Vec3& shift) {
  MagnetAssembly out = assembly;
  out.top.center += shift;
  return out;
}

MagnetAssembly with_top_rotated(const MagnetAssembly& assembly, const RotationAngles& angles) {
  MagnetAssembly out = assembly;
  const Mat3 rot = rotation_matrix(angles);
  const Vec3 pivot = assembly.top.bottom_face_center();
  out.top.center = pivot + rot * (assembly.top.center - pivot);
  out.top.axis = (rot * assembly.top.axis).normalized();
  return out;
}

Vec3 numeric_field_delta(const MagnetAssembly& before, const MagnetAssembly& after, const Vec3& p,
                         const QuadratureSpec& quadrature) {
  return assembly_field(after, p, quadrature) - assembly_field(before, p, quadrature);
}

}  // namespace magpulse
