#include "magpulse/placement.hpp"

#include "magpulse/errors.hpp"
#include "magpulse/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>

namespace magpulse {

void GridSpec::validate() const {
  if (!(x_min < x_max) || !(z_min < z_max)) throw ConfigError("grid ranges need min < max");
  if (nx < 2 || nz < 2) throw ConfigError("grid counts must be >= 2");
  if (!std::isfinite(y_plane)) throw ConfigError("grid y_plane must be finite");
}

double GridSpec::x_at(int ix) const { return x_min + (x_max - x_min) * ix / (nx - 1); }
double GridSpec::z_at(int iz) const { return z_min + (z_max - z_min) * iz / (nz - 1); }

const GridNode& SensitivityGrid::at(int ix, int iz) const {
  return nodes.at(static_cast<std::size_t>(iz) * spec.nx + ix);
}

std::size_t SensitivityGrid::feasible_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const GridNode& n) { return n.feasible; }));
}

SensitivityGrid scan_sensitivity(const MagnetAssembly& assembly, const FingerRegion& finger,
                                 const SensorSpec& sensor, const GridSpec& grid,
                                 const PerturbationSet& perturbations, const QuadratureSpec& quadrature) {
  assembly.validate();
  finger.validate();
  sensor.validate();
  grid.validate();
  quadrature.validate();

  const bool shift = perturbations.dz != 0.0;
  const bool rotate = perturbations.angles.max_abs() != 0.0;
  const bool susceptible = perturbations.dchi != 0.0;

  const MagnetAssembly shifted = with_top_shifted(assembly, Vec3(0.0, 0.0, perturbations.dz));
  const MagnetAssembly rotated = with_top_rotated(assembly, perturbations.angles);
  const SurfaceChargeField bottom_field({assembly.bottom}, quadrature);
  const SurfaceChargeField top_field({assembly.top}, quadrature);
  const SurfaceChargeField shifted_field({shifted.top}, quadrature);
  const SurfaceChargeField rotated_field({rotated.top}, quadrature);
  std::optional<InducedField> induced;
  if (susceptible) {
    FingerRegion perturbed = finger;
    perturbed.chi = perturbations.dchi;
    induced.emplace(perturbed, assembly, quadrature);
  }

  SensitivityGrid out;
  out.spec = grid;
  out.sensor = sensor;
  out.perturbations = perturbations;
  out.nodes.resize(grid.size());

  const Vec3 s = sensor.axis;
  parallel_for(grid.size(), [&](std::size_t idx) {
    GridNode& node = out.nodes[idx];
    node.ix = static_cast<int>(idx % grid.nx);
    node.iz = static_cast<int>(idx / grid.nx);
    node.position = Vec3(grid.x_at(node.ix), grid.y_plane, grid.z_at(node.iz));
    const Vec3& p = node.position;

    node.valid = !assembly.contains(p) && !shifted.top.contains(p) && !rotated.top.contains(p) &&
                 !finger.contains(p);
    if (!node.valid) {
      constexpr double nan = std::numeric_limits<double>::quiet_NaN();
      node.h_static = Vec3::Constant(nan);
      node.dh_displacement = node.dh_rotation = node.dh_susceptibility = nan;
      node.feasible = false;
      return;
    }
    const Vec3 h_bottom = bottom_field(p);
    const Vec3 h_top = top_field(p);
    node.h_static = h_bottom + h_top;
    node.dh_displacement = shift ? s.dot(shifted_field(p) - h_top) : 0.0;
    node.dh_rotation = rotate ? s.dot(rotated_field(p) - h_top) : 0.0;
    node.dh_susceptibility = susceptible ? s.dot((*induced)(p)) : 0.0;
    node.feasible = std::abs(s.dot(node.h_static)) < sensor.dynamic_range;
  });
  return out;
}

void apply_dynamic_range(SensitivityGrid& grid, double dynamic_range) {
  if (!(dynamic_range > 0.0)) throw ConfigError("dynamic_range must be > 0");
  grid.sensor.dynamic_range = dynamic_range;
  for (auto& node : grid.nodes) {
    node.feasible = node.valid && std::abs(grid.sensor.axis.dot(node.h_static)) < dynamic_range;
  }
}

Ranking rank_placements(const SensitivityGrid& grid, std::size_t k) {
  Ranking out;
  for (const auto& node : grid.nodes) {
    if (node.feasible) out.nodes.push_back(node);
  }
  if (out.nodes.empty()) {
    out.diagnostic = "no feasible placement: static field exceeds the dynamic range at every valid node";
    return out;
  }
  const Vec3 s = grid.sensor.axis;
  auto key = [&s](const GridNode& n) {
    return std::make_tuple(-std::abs(n.dh_displacement), std::abs(s.dot(n.h_static)), n.position.x(),
                           n.position.z());
  };
  std::sort(out.nodes.begin(), out.nodes.end(),
            [&key](const GridNode& a, const GridNode& b) { return key(a) < key(b); });
  if (out.nodes.size() > k) out.nodes.resize(k);
  return out;
}

std::vector<SweepRow> dipole_validity_sweep(const MagnetAssembly& assembly, const SensorSpec& sensor,
                                            const std::vector<double>& x_list,
                                            const std::vector<double>& dz_list,
                                            const std::vector<double>& beta_list,
                                            const QuadratureSpec& quadrature) {
  assembly.validate();
  quadrature.validate();
  const CylindricalMagnet& top = assembly.top;
  for (double x : x_list) {
    if (!(x >= top.radius)) throw ConfigError("sweep positions must satisfy x >= magnet radius");
  }
  const Vec3 moment = dipole_moment(top);
  // Closed forms are field deltas here: evaluate them with a unit-gain x-axis sensor.
  SensorSpec probe_sensor = sensor;
  probe_sensor.axis = Vec3::UnitX();
  probe_sensor.sensitivity = 1.0;

  const SurfaceChargeField bottom_field({assembly.bottom}, quadrature);
  const SurfaceChargeField top_field({top}, quadrature);
  auto relative = [](double dipole, double numeric) {
    if (dipole == 0.0 && numeric == 0.0) return 0.0;
    return std::abs(dipole - numeric) / std::abs(numeric);
  };

  std::vector<SweepRow> rows;
  for (double x : x_list) {
    const Vec3 p = top.center + Vec3(x, 0.0, 0.0);
    const Vec3 r = magnet_offset_from_sensor(top.center, p);
    const Vec3 h_before = bottom_field(p) + top_field(p);
    for (double dz : dz_list) {
      const MagnetAssembly after = with_top_shifted(assembly, Vec3(0.0, 0.0, dz));
      const SurfaceChargeField after_top({after.top}, quadrature);
      SweepRow row{SweepMode::displacement, x, dz, 0.0, 0.0, 0.0};
      row.dh_dipole = displacement_signal(probe_sensor, moment, r, Vec3(0.0, 0.0, dz)).field_delta.x();
      row.dh_numeric = (bottom_field(p) + after_top(p) - h_before).x();
      row.rel_err = relative(row.dh_dipole, row.dh_numeric);
      rows.push_back(row);
    }
    for (double beta : beta_list) {
      const RotationAngles angles{0.0, beta, 0.0};
      const MagnetAssembly after = with_top_rotated(assembly, angles);
      const SurfaceChargeField after_top({after.top}, quadrature);
      SweepRow row{SweepMode::rotation, x, beta, 0.0, 0.0, 0.0};
      row.dh_dipole = rotation_signal(probe_sensor, moment, r, angles).field_delta.x();
      row.dh_numeric = (bottom_field(p) + after_top(p) - h_before).x();
      row.rel_err = relative(row.dh_dipole, row.dh_numeric);
      rows.push_back(row);
    }
  }
  return rows;
}

const char* to_string(SweepMode mode) {
  return mode == SweepMode::displacement ? "displacement" : "rotation";
}

}  // namespace magpulse
