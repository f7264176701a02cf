#pragma once

#include <numbers>

namespace magpulse::units {

/// 1 Oe expressed in A/m (10^3 / 4pi, exact by definition).
inline constexpr double kAmperePerMeterPerOersted = 1.0e3 / (4.0 * std::numbers::pi);

constexpr double oersted_from_si(double h_si) { return h_si / kAmperePerMeterPerOersted; }
constexpr double si_from_oersted(double h_oe) { return h_oe * kAmperePerMeterPerOersted; }

/// Sensor sensitivity: mV/Oe -> V per (A/m).
constexpr double volts_per_si_from_mv_per_oe(double mv_per_oe) {
  return mv_per_oe * 1.0e-3 / kAmperePerMeterPerOersted;
}
constexpr double mv_per_oe_from_volts_per_si(double v_per_si) {
  return v_per_si * kAmperePerMeterPerOersted * 1.0e3;
}

}  // namespace magpulse::units
