#pragma once

// Sensor placement maps over the xz plane of the magnet pair. A candidate
// position is usable when the static field along the sensing axis stays inside
// the sensor's dynamic range; among those, the best positions see the largest
// field change for a given magnet displacement.

#include "magpulse/magnetostatics.hpp"
#include "magpulse/perturbation.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace magpulse {

struct GridSpec {
  double x_min = 6.0e-3;
  double x_max = 30.0e-3;
  double z_min = 0.0;
  double z_max = 16.0e-3;
  int nx = 121;
  int nz = 81;
  double y_plane = 0.0;

  void validate() const;
  double x_at(int ix) const;
  double z_at(int iz) const;
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(nz); }
};

struct PerturbationSet {
  double dz = 0.0;          // top-magnet shift along +z, m
  RotationAngles angles{};  // top-magnet rotation about its bottom-face centre
  double dchi = 0.0;        // susceptibility change of the finger region
};

// Field values are components along the sensor axis (H_x for the usual sensor).
struct GridNode {
  int ix = 0;
  int iz = 0;
  Vec3 position = Vec3::Zero();
  Vec3 h_static = Vec3::Zero();
  double dh_displacement = 0.0;
  double dh_rotation = 0.0;
  double dh_susceptibility = 0.0;
  bool valid = false;     // false inside a magnet (either pose) or the finger
  bool feasible = false;  // valid and |s . H_static| < dynamic range
};

struct SensitivityGrid {
  GridSpec spec;
  SensorSpec sensor;
  PerturbationSet perturbations;
  std::vector<GridNode> nodes;  // z-major: index = iz * nx + ix

  const GridNode& at(int ix, int iz) const;
  std::size_t feasible_count() const;
};

/// Evaluates static field and the three perturbation deltas at every grid node.
/// Nodes inside a source are flagged invalid (NaN values) rather than failing the scan.
SensitivityGrid scan_sensitivity(const MagnetAssembly& assembly, const FingerRegion& finger,
                                 const SensorSpec& sensor, const GridSpec& grid,
                                 const PerturbationSet& perturbations, const QuadratureSpec& quadrature);

/// Recomputes the feasibility flags for a different dynamic range (A/m).
void apply_dynamic_range(SensitivityGrid& grid, double dynamic_range);

struct Ranking {
  std::vector<GridNode> nodes;
  std::string diagnostic;  // set when nothing is feasible
};

/// Feasible nodes by |dh_displacement| descending; ties by smaller |s . H_static|,
/// then by (x, z). Returns at most k nodes.
Ranking rank_placements(const SensitivityGrid& grid, std::size_t k);

enum class SweepMode { displacement, rotation };

struct SweepRow {
  SweepMode mode = SweepMode::displacement;
  double x = 0.0;           // distance from the top-magnet axis along its midline, m
  double dz_or_beta = 0.0;  // m or rad
  double dh_dipole = 0.0;   // A/m
  double dh_numeric = 0.0;  // A/m
  double rel_err = 0.0;     // |dipole - numeric| / |numeric|, 0 when both vanish
};

/// Dipole closed forms against the finite-cylinder model at probes (x, 0, z_top),
/// for a top-magnet shift dz and a pitch rotation beta about the bottom-face centre.
std::vector<SweepRow> dipole_validity_sweep(const MagnetAssembly& assembly, const SensorSpec& sensor,
                                            const std::vector<double>& x_list,
                                            const std::vector<double>& dz_list,
                                            const std::vector<double>& beta_list,
                                            const QuadratureSpec& quadrature);

const char* to_string(SweepMode mode);

}  // namespace magpulse
