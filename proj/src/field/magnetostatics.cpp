#include "magpulse/magnetostatics.hpp"

#include "magpulse/errors.hpp"
#include "magpulse/quadrature.hpp"
#include "magpulse/units.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace magpulse {
namespace {

constexpr double kInvFourPi = 1.0 / (4.0 * std::numbers::pi);

void require_unit(const Vec3& v, const char* what) {
  if (!all_finite(v) || std::abs(v.norm() - 1.0) > 1e-12) {
    throw ConfigError(std::string(what) + " must be a unit vector");
  }
}

}  // namespace

bool all_finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

void CylindricalMagnet::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("magnet radius must be > 0");
  if (!(thickness > 0.0) || !std::isfinite(thickness)) throw ConfigError("magnet thickness must be > 0");
  if (!(ms >= 0.0) || !std::isfinite(ms)) throw ConfigError("magnet Ms must be >= 0");
  if (!all_finite(center)) throw ConfigError("magnet center must be finite");
  require_unit(axis, "magnet axis");
}

bool CylindricalMagnet::contains(const Vec3& p) const {
  const Vec3 d = p - center;
  const double along = d.dot(axis);
  if (std::abs(along) > 0.5 * thickness) return false;
  return (d - along * axis).norm() <= radius;
}

MagnetAssembly MagnetAssembly::symmetric(double radius, double thickness, double ms,
                                         double surface_gap) {
  if (!(surface_gap > 0.0)) throw ConfigError("surface_gap must be > 0");
  MagnetAssembly a;
  a.surface_gap = surface_gap;
  const double half_span = 0.5 * (surface_gap + thickness);
  a.bottom = CylindricalMagnet{radius, thickness, ms, Vec3(0.0, 0.0, -half_span), Vec3::UnitZ()};
  a.top = CylindricalMagnet{radius, thickness, ms, Vec3(0.0, 0.0, half_span), Vec3::UnitZ()};
  a.validate();
  return a;
}

MagnetAssembly MagnetAssembly::reference() { return symmetric(5.0e-3, 5.0e-3, 962.9e3, 9.0e-3); }

void MagnetAssembly::validate() const {
  bottom.validate();
  top.validate();
  if (!(surface_gap > 0.0)) throw ConfigError("surface_gap must be > 0");
}

void FingerRegion::validate() const {
  if (!all_finite(half_extents) || !(half_extents.minCoeff() > 0.0)) {
    throw ConfigError("finger half_extents must all be > 0");
  }
  if (!all_finite(center)) throw ConfigError("finger center must be finite");
  if (!std::isfinite(chi) || !(std::abs(chi) < 1e-3)) {
    throw ConfigError("finger chi must satisfy |chi| < 1e-3 (linear response)");
  }
}

bool FingerRegion::contains(const Vec3& p) const {
  const Vec3 d = (p - center).cwiseAbs();
  return (d.array() <= half_extents.array()).all();
}

void QuadratureSpec::validate() const {
  if (radial_nodes < 2 || angular_nodes < 2 || volume_nodes_per_axis < 2) {
    throw ConfigError("quadrature node counts must all be >= 2");
  }
}

QuadratureSpec QuadratureSpec::refined(int factor) const {
  return {radial_nodes * factor, angular_nodes * factor, volume_nodes_per_axis * factor};
}

SensorSpec SensorSpec::from_datasheet(const Vec3& position, const Vec3& axis, double mv_per_oe,
                                      double dynamic_range_oe) {
  SensorSpec s;
  s.position = position;
  s.axis = axis;
  s.sensitivity = units::volts_per_si_from_mv_per_oe(mv_per_oe);
  s.dynamic_range = units::si_from_oersted(dynamic_range_oe);
  s.validate();
  return s;
}

SensorSpec SensorSpec::reference() {
  return from_datasheet(Vec3(17.5e-3, 0.0, 7.5e-3), Vec3::UnitX(), 1.28, 100.0);
}

void SensorSpec::validate() const {
  if (!all_finite(position)) throw ConfigError("sensor position must be finite");
  require_unit(axis, "sensor axis");
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) throw ConfigError("sensor sensitivity must be > 0");
  if (!(dynamic_range > 0.0) || !std::isfinite(dynamic_range)) {
    throw ConfigError("sensor dynamic_range must be > 0");
  }
}

Vec3 dipole_field(const Vec3& moment, const Vec3& offset) {
  const double r2 = offset.squaredNorm();
  if (!(r2 > 0.0)) throw DomainError("dipole_field: singular at the dipole position");
  const double r = std::sqrt(r2);
  const double inv_r3 = 1.0 / (r2 * r);
  const double inv_r5 = inv_r3 / r2;
  return kInvFourPi * (3.0 * moment.dot(offset) * inv_r5 * offset - inv_r3 * moment);
}

Vec3 dipole_moment(const CylindricalMagnet& magnet) {
  magnet.validate();
  const double volume = std::numbers::pi * magnet.radius * magnet.radius * magnet.thickness;
  return magnet.ms * volume * magnet.axis;
}

SurfaceChargeField::SurfaceChargeField(const std::vector<CylindricalMagnet>& magnets,
                                       const QuadratureSpec& quadrature)
    : magnets_(magnets) {
  quadrature.validate();
  const auto nr = static_cast<std::size_t>(quadrature.radial_nodes);
  const auto na = static_cast<std::size_t>(quadrature.angular_nodes);
  const QuadratureRule radial = gauss_legendre(nr, 0.0, 1.0);
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(na);

  const std::size_t total = magnets.size() * 2 * nr * na;
  x_.reserve(total);
  y_.reserve(total);
  z_.reserve(total);
  q_.reserve(total);
  for (const auto& mag : magnets) {
    mag.validate();
    const Vec3 u = mag.axis.unitOrthogonal();
    const Vec3 v = mag.axis.cross(u);
    for (int face = 0; face < 2; ++face) {
      // Magnetization exits the +axis face (sigma = +Ms) and enters the other.
      const double sign = face == 0 ? 1.0 : -1.0;
      const Vec3 face_center = mag.center + sign * 0.5 * mag.thickness * mag.axis;
      for (std::size_t i = 0; i < nr; ++i) {
        const double rho = mag.radius * radial.nodes[i];
        const double ring = sign * mag.ms * rho * mag.radius * radial.weights[i] * dphi;
        for (std::size_t j = 0; j < na; ++j) {
          const double phi = (static_cast<double>(j) + 0.5) * dphi;
          const Vec3 node = face_center + rho * (std::cos(phi) * u + std::sin(phi) * v);
          x_.push_back(node.x());
          y_.push_back(node.y());
          z_.push_back(node.z());
          q_.push_back(ring);
        }
      }
    }
  }
}

bool SurfaceChargeField::inside_source(const Vec3& p) const {
  for (const auto& mag : magnets_) {
    if (mag.contains(p)) return true;
  }
  return false;
}

Vec3 SurfaceChargeField::operator()(const Vec3& p) const {
  if (!all_finite(p)) throw DomainError("field point must be finite");
  if (inside_source(p)) throw DomainError("field point lies inside a magnet");
  double hx = 0.0, hy = 0.0, hz = 0.0;
  const std::size_t n = x_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = p.x() - x_[k];
    const double dy = p.y() - y_[k];
    const double dz = p.z() - z_[k];
    const double r2 = dx * dx + dy * dy + dz * dz;
    const double w = q_[k] / (r2 * std::sqrt(r2));
    hx += w * dx;
    hy += w * dy;
    hz += w * dz;
  }
  return kInvFourPi * Vec3(hx, hy, hz);
}

Vec3 cylinder_field(const CylindricalMagnet& magnet, const Vec3& p, const QuadratureSpec& quadrature) {
  return SurfaceChargeField({magnet}, quadrature)(p);
}

Vec3 assembly_field(const MagnetAssembly& assembly, const Vec3& p, const QuadratureSpec& quadrature) {
  assembly.validate();
  return SurfaceChargeField({assembly.bottom}, quadrature)(p) +
         SurfaceChargeField({assembly.top}, quadrature)(p);
}

InducedField::InducedField(const FingerRegion& region, const MagnetAssembly& assembly,
                           const QuadratureSpec& quadrature)
    : region_(region) {
  region.validate();
  assembly.validate();
  quadrature.validate();
  const SurfaceChargeField bottom({assembly.bottom}, quadrature);
  const SurfaceChargeField top({assembly.top}, quadrature);
  const auto n = static_cast<std::size_t>(quadrature.volume_nodes_per_axis);
  QuadratureRule axes[3];
  for (int a = 0; a < 3; ++a) {
    axes[a] = gauss_legendre(n, region.center[a] - region.half_extents[a],
                             region.center[a] + region.half_extents[a]);
  }
  positions_.reserve(n * n * n);
  moments_.reserve(n * n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const Vec3 r(axes[0].nodes[i], axes[1].nodes[j], axes[2].nodes[k]);
        const double w = axes[0].weights[i] * axes[1].weights[j] * axes[2].weights[k];
        const Vec3 applied = bottom(r) + top(r);
        positions_.push_back(r);
        // chi applied last so scaling chi scales every moment exactly.
        moments_.push_back(region.chi * (w * applied));
      }
    }
  }
}

Vec3 InducedField::operator()(const Vec3& p) const {
  if (!all_finite(p)) throw DomainError("field point must be finite");
  if (region_.contains(p)) throw DomainError("field point lies inside the susceptible region");
  Vec3 h = Vec3::Zero();
  for (std::size_t i = 0; i < positions_.size(); ++i) h += dipole_field(moments_[i], p - positions_[i]);
  return h;
}

Vec3 induced_susceptibility_field(const FingerRegion& region, const MagnetAssembly& assembly,
                                  const Vec3& p, const QuadratureSpec& quadrature) {
  if (region.contains(p)) throw DomainError("field point lies inside the susceptible region");
  return InducedField(region, assembly, quadrature)(p);
}

}  // namespace magpulse
