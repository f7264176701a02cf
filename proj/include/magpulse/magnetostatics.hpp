#pragma once

// Exterior magnetostatic fields of permanent-magnet pulse sensors.
//
// Internal units are SI throughout: metres, A/m for H, A*m^2 for moments.
// The world frame has its origin midway between the two magnets with +z
// through both rotation centres; magnetizations point along +z.

#include <Eigen/Dense>

#include <vector>

namespace magpulse {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

bool all_finite(const Vec3& v);

/// Axially magnetized solid cylinder.
struct CylindricalMagnet {
  double radius = 5.0e-3;     // m
  double thickness = 5.0e-3;  // m
  double ms = 962.9e3;        // A/m
  Vec3 center = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();  // magnetization direction, unit length

  /// Throws ConfigError unless radius, thickness > 0, ms >= 0 and |axis| = 1.
  /// A zero ms is accepted so a magnet can be switched off in a superposition.
  void validate() const;
  /// True when p lies in the closed body.
  bool contains(const Vec3& p) const;
  /// Centre of the face the magnetization points away from.
  Vec3 bottom_face_center() const { return center - 0.5 * thickness * axis; }
};

/// Fixed bottom magnet plus the movable top magnet riding on the fingertip.
struct MagnetAssembly {
  CylindricalMagnet bottom;
  CylindricalMagnet top;
  double surface_gap = 9.0e-3;  // nominal face-to-face spacing, m

  /// Canonical configuration: identical magnets on the z axis, both +z,
  /// body centres at +-(surface_gap + thickness)/2.
  static MagnetAssembly symmetric(double radius, double thickness, double ms, double surface_gap);
  /// The reference device: R = T = 5 mm, Ms = 962.9 kA/m, 9 mm gap (14 mm between centres).
  static MagnetAssembly reference();

  void validate() const;
  bool contains(const Vec3& p) const { return bottom.contains(p) || top.contains(p); }
};

/// Cuboid of weakly susceptible tissue.
struct FingerRegion {
  Vec3 half_extents{10.0e-3, 5.0e-3, 4.5e-3};
  Vec3 center = Vec3::Zero();
  double chi = 1.0e-7;

  void validate() const;
  bool contains(const Vec3& p) const;
};

struct QuadratureSpec {
  int radial_nodes = 16;           // Gauss-Legendre nodes over each end-face radius
  int angular_nodes = 48;          // periodic midpoint nodes around each end face
  int volume_nodes_per_axis = 10;  // Gauss-Legendre nodes per cuboid axis

  void validate() const;
  QuadratureSpec refined(int factor = 2) const;
};

/// Magnetic sensor. Sensitivity is stored in V per (A/m), dynamic range in A/m;
/// use from_datasheet for the usual mV/Oe and Oe figures.
struct SensorSpec {
  Vec3 position{17.5e-3, 0.0, 7.5e-3};
  Vec3 axis = Vec3::UnitX();
  double sensitivity = 0.0;
  double dynamic_range = 0.0;

  static SensorSpec from_datasheet(const Vec3& position, const Vec3& axis, double mv_per_oe,
                                   double dynamic_range_oe);
  /// TMR part used with the reference device: 1.28 mV/Oe, +-100 Oe.
  static SensorSpec reference();

  void validate() const;
};

/// Point-dipole field H = (3 r (m.r)/|r|^5 - m/|r|^3) / 4pi at offset r from the dipole.
/// Throws DomainError at r = 0.
Vec3 dipole_field(const Vec3& moment, const Vec3& offset);

/// Equivalent moment Ms * pi R^2 T along the magnet axis.
Vec3 dipole_moment(const CylindricalMagnet& magnet);

/// Point charges standing in for the two end-face surface charges (sigma = +-Ms)
/// of a set of magnets. Field evaluation is a plain Coulomb sum, so the result is
/// exactly divergence- and curl-free away from the nodes.
class SurfaceChargeField {
 public:
  SurfaceChargeField(const std::vector<CylindricalMagnet>& magnets, const QuadratureSpec& quadrature);

  /// Throws DomainError if p is inside any magnet.
  Vec3 operator()(const Vec3& p) const;
  bool inside_source(const Vec3& p) const;
  std::size_t node_count() const { return x_.size(); }

 private:
  std::vector<CylindricalMagnet> magnets_;
  std::vector<double> x_, y_, z_, q_;
};

/// Field of one cylinder via surface-charge disks. Throws DomainError inside the
/// magnet, ConfigError on invalid quadrature.
Vec3 cylinder_field(const CylindricalMagnet& magnet, const Vec3& p, const QuadratureSpec& quadrature);

/// Superposition of the bottom and top cylinder fields.
Vec3 assembly_field(const MagnetAssembly& assembly, const Vec3& p, const QuadratureSpec& quadrature);

/// Linear (non self-consistent) response of a susceptible cuboid: dipole density
/// M = chi * H_applied sampled on a Gauss-Legendre volume grid. Construction
/// evaluates the applied field once; queries are then cheap.
class InducedField {
 public:
  InducedField(const FingerRegion& region, const MagnetAssembly& assembly,
               const QuadratureSpec& quadrature);

  /// Throws DomainError if p is inside the region.
  Vec3 operator()(const Vec3& p) const;
  const FingerRegion& region() const { return region_; }

 private:
  FingerRegion region_;
  std::vector<Vec3> positions_;
  std::vector<Vec3> moments_;
};

Vec3 induced_susceptibility_field(const FingerRegion& region, const MagnetAssembly& assembly,
                                  const Vec3& p, const QuadratureSpec& quadrature);

}  // namespace magpulse
