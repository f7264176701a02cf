#include "magpulse/io.hpp"

#include "magpulse/errors.hpp"
#include "magpulse/units.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace magpulse::io {
namespace {

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("trailing characters in number '" + s + "'");
  return v;
}

}  // namespace

std::string six_significant(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string grid_to_csv(const SensitivityGrid& grid) {
  using units::oersted_from_si;
  std::ostringstream out;
  out << "x_m,z_m,Hx_Apm,Hx_Oe,dHx_disp_Apm,dHx_disp_Oe,dHx_rot_Apm,dHx_rot_Oe,"
         "dHx_chi_Apm,dHx_chi_Oe,dHx_chi_1e-4Oe,valid,feasible\n";
  const Vec3 s = grid.sensor.axis;
  for (const auto& n : grid.nodes) {
    const double h = s.dot(n.h_static);
    out << full(n.position.x()) << ',' << full(n.position.z()) << ',' << full(h) << ','
        << six_significant(oersted_from_si(h)) << ',' << full(n.dh_displacement) << ','
        << six_significant(oersted_from_si(n.dh_displacement)) << ',' << full(n.dh_rotation) << ','
        << six_significant(oersted_from_si(n.dh_rotation)) << ',' << full(n.dh_susceptibility) << ','
        << six_significant(oersted_from_si(n.dh_susceptibility)) << ','
        << six_significant(oersted_from_si(n.dh_susceptibility) * 1e4) << ',' << (n.valid ? 1 : 0) << ','
        << (n.feasible ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string grid_to_json(const SensitivityGrid& grid) {
  using nlohmann::json;
  using units::oersted_from_si;
  // JSON has no NaN: invalid nodes carry nulls.
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json nodes = json::array();
  const Vec3 s = grid.sensor.axis;
  for (const auto& n : grid.nodes) {
    const double h = s.dot(n.h_static);
    nodes.push_back({{"x_m", n.position.x()},
                     {"z_m", n.position.z()},
                     {"Hx_Apm", num(h)},
                     {"Hx_Oe", num(oersted_from_si(h))},
                     {"dHx_disp_Apm", num(n.dh_displacement)},
                     {"dHx_rot_Apm", num(n.dh_rotation)},
                     {"dHx_chi_Apm", num(n.dh_susceptibility)},
                     {"valid", n.valid},
                     {"feasible", n.feasible}});
  }
  json doc = {{"grid",
               {{"x_range_m", {grid.spec.x_min, grid.spec.x_max}},
                {"z_range_m", {grid.spec.z_min, grid.spec.z_max}},
                {"nx", grid.spec.nx},
                {"nz", grid.spec.nz},
                {"y_plane_m", grid.spec.y_plane},
                {"order", "z-major"}}},
              {"sensor_dynamic_range_Apm", grid.sensor.dynamic_range},
              {"perturbations",
               {{"dz_m", grid.perturbations.dz},
                {"alpha_rad", grid.perturbations.angles.alpha},
                {"beta_rad", grid.perturbations.angles.beta},
                {"gamma_rad", grid.perturbations.angles.gamma},
                {"dchi", grid.perturbations.dchi}}},
              {"nodes", nodes}};
  return doc.dump(1) + "\n";
}

std::vector<GridRow> parse_grid_csv(std::string_view csv) {
  std::vector<GridRow> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("x_m,z_m,Hx_Apm", 0) != 0) {
    throw ConfigError("grid CSV: missing or unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 13) throw ConfigError("grid CSV: expected 13 columns, got " + std::to_string(f.size()));
    GridRow r;
    r.x = to_double(f[0]);
    r.z = to_double(f[1]);
    r.hx = to_double(f[2]);
    r.dhx_disp = to_double(f[4]);
    r.dhx_rot = to_double(f[6]);
    r.dhx_chi = to_double(f[8]);
    r.valid = f[11] == "1";
    r.feasible = f[12] == "1";
    rows.push_back(r);
  }
  return rows;
}

std::uint64_t grid_checksum(const SensitivityGrid& grid) {
  using units::oersted_from_si;
  std::string text;
  const Vec3 s = grid.sensor.axis;
  for (const auto& n : grid.nodes) {
    text += six_significant(oersted_from_si(s.dot(n.h_static))) + ',' +
            six_significant(oersted_from_si(n.dh_displacement)) + ',' +
            six_significant(oersted_from_si(n.dh_rotation)) + ',' + (n.feasible ? "1" : "0") + '\n';
  }
  return fnv1a(text);
}

std::string ranking_to_csv(const Ranking& ranking, const SensorSpec& sensor) {
  using units::oersted_from_si;
  std::ostringstream out;
  out << "rank,x_m,z_m,dHx_disp_Apm,dHx_disp_Oe,Hx_Apm,Hx_Oe\n";
  for (std::size_t i = 0; i < ranking.nodes.size(); ++i) {
    const auto& n = ranking.nodes[i];
    const double h = sensor.axis.dot(n.h_static);
    out << i + 1 << ',' << full(n.position.x()) << ',' << full(n.position.z()) << ','
        << full(n.dh_displacement) << ',' << six_significant(oersted_from_si(n.dh_displacement)) << ','
        << full(h) << ',' << six_significant(oersted_from_si(h)) << '\n';
  }
  return out.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, SweepMode mode) {
  std::ostringstream out;
  out << "x,dz_or_beta,dH_dipole,dH_numeric,rel_err\n";
  for (const auto& r : rows) {
    if (r.mode != mode) continue;
    out << full(r.x) << ',' << full(r.dz_or_beta) << ',' << full(r.dh_dipole) << ',' << full(r.dh_numeric)
        << ',' << full(r.rel_err) << '\n';
  }
  return out.str();
}

}  // namespace magpulse::io
