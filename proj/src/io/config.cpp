#include "magpulse/config.hpp"

#include "magpulse/errors.hpp"
#include "magpulse/units.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace magpulse {
namespace {

using nlohmann::json;

const std::map<std::string, double>& unit_table(Dimension dim) {
  static const std::map<std::string, double> length{
      {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"\xC2\xB5m", 1e-6}, {"\xCE\xBCm", 1e-6}};
  static const std::map<std::string, double> field{
      {"A/m", 1.0}, {"kA/m", 1e3}, {"Oe", units::kAmperePerMeterPerOersted}};
  static const std::map<std::string, double> sensitivity{
      {"V/(A/m)", 1.0}, {"mV/Oe", units::volts_per_si_from_mv_per_oe(1.0)},
      {"V/Oe", units::volts_per_si_from_mv_per_oe(1e3)}};
  static const std::map<std::string, double> angle{
      {"rad", 1.0}, {"mrad", 1e-3}, {"deg", std::numbers::pi / 180.0}};
  static const std::map<std::string, double> frequency{{"Hz", 1.0}};
  static const std::map<std::string, double> time{{"s", 1.0}, {"ms", 1e-3}};
  static const std::map<std::string, double> none{};
  switch (dim) {
    case Dimension::length: return length;
    case Dimension::field: return field;
    case Dimension::sensitivity: return sensitivity;
    case Dimension::angle: return angle;
    case Dimension::frequency: return frequency;
    case Dimension::time: return time;
    case Dimension::dimensionless: return none;
  }
  return none;
}

// Cursor over one JSON object that remembers its dotted path and which keys
// were consumed, so leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where("") + "expected an object");
  }
  ~Section() = default;

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }
  std::string where(const std::string& key) const {
    return path_.empty() ? key + ": " : path_ + (key.empty() ? "" : "." + key) + ": ";
  }
  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void quantity(const std::string& key, Dimension dim, double& out) {
    if (has(key)) out = to_quantity(obj_.at(key), dim, name(key));
  }
  void vec3(const std::string& key, Dimension dim, Vec3& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_array() || v.size() != 3) throw ConfigError(where(key) + "expected an array of 3 values");
    for (int i = 0; i < 3; ++i) out[i] = to_quantity(v.at(i), dim, name(key) + "[" + std::to_string(i) + "]");
  }
  void list(const std::string& key, Dimension dim, std::vector<double>& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_array()) throw ConfigError(where(key) + "expected an array");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(to_quantity(v.at(i), dim, name(key) + "[" + std::to_string(i) + "]"));
    }
  }
  void range(const std::string& key, Dimension dim, double& lo, double& hi) {
    std::vector<double> v;
    list(key, dim, v);
    if (!has(key)) return;
    if (v.size() != 2) throw ConfigError(where(key) + "expected [min, max]");
    lo = v[0];
    hi = v[1];
  }
  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + "expected an integer");
    out = v.get<Int>();
  }
  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(obj_.at(key), name(key));
  }
  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(where(key) + "unknown key");
    }
  }

 private:
  static double to_quantity(const json& v, Dimension dim, const std::string& field) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_quantity(v.get<std::string>(), dim, field);
    throw ConfigError(field + ": expected a number or a string with units");
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};


void read_synth(Section s, dsp::SynthConfig& c) {
  s.quantity("heart_rate_bpm", Dimension::dimensionless, c.heart_rate_bpm);
  s.quantity("duration_s", Dimension::time, c.duration_s);
  s.quantity("fs", Dimension::frequency, c.fs);
  s.quantity("pulse_amplitude", Dimension::length, c.pulse_amplitude);
  for (const char* lobe : {"systolic", "dicrotic", "diastolic"}) {
    if (s.has(lobe)) {
      Section l = s.child(lobe);
      dsp::Lobe& target = std::string(lobe) == "systolic" ? c.systolic
                          : std::string(lobe) == "dicrotic" ? c.dicrotic
                                                            : c.diastolic;
      l.quantity("amplitude", Dimension::dimensionless, target.amplitude);
      l.quantity("center", Dimension::dimensionless, target.center);
      l.quantity("width", Dimension::dimensionless, target.width);
      l.finish();
    }
  }
  if (s.has("runoff")) {
    Section r = s.child("runoff");
    r.quantity("amplitude", Dimension::dimensionless, c.runoff.amplitude);
    r.quantity("onset", Dimension::dimensionless, c.runoff.onset);
    r.quantity("rise", Dimension::dimensionless, c.runoff.rise);
    r.quantity("decay", Dimension::dimensionless, c.runoff.decay);
    r.finish();
  }
  s.quantity("respiration_hz", Dimension::frequency, c.respiration_hz);
  s.quantity("respiration_amplitude", Dimension::length, c.respiration_amplitude);
  s.quantity("displacement_to_volts", Dimension::dimensionless, c.displacement_to_volts);
  s.quantity("pitch_amplitude", Dimension::angle, c.pitch_amplitude);
  s.quantity("roll_amplitude", Dimension::angle, c.roll_amplitude);
  s.quantity("spot_x", Dimension::length, c.spot_x);
  s.quantity("spot_y", Dimension::length, c.spot_y);
  s.quantity("rotation_mixing", Dimension::dimensionless, c.rotation_mixing);
  s.quantity("noise_sd_magnetic", Dimension::dimensionless, c.noise_sd_magnetic);
  s.quantity("noise_sd_vibration", Dimension::length, c.noise_sd_vibration);
  s.integer("seed", c.seed);
  s.finish();
  c.validate();
}

void read_pipeline(Section s, dsp::PipelineConfig& c) {
  s.quantity("segment_s", Dimension::time, c.segment_s);
  s.range("band", Dimension::frequency, c.f_lo, c.f_hi);
  s.quantity("fs", Dimension::frequency, c.fs);
  s.integer("filter_order", c.filter_order);
  s.integer("template_points", c.template_points);
  s.quantity("min_prominence", Dimension::dimensionless, c.min_prominence);
  s.quantity("min_distance_s", Dimension::time, c.min_distance_s);
  s.quantity("max_interval_cv", Dimension::dimensionless, c.max_interval_cv);
  s.integer("max_pulses_per_segment", c.max_pulses_per_segment);
  s.finish();
  c.validate();
}

RunConfig from_json(const json& root) {
  RunConfig cfg;
  Section top(root, "");

  if (top.has("magnets")) {
    Section s = top.child("magnets");
    double radius = cfg.assembly.top.radius, thickness = cfg.assembly.top.thickness;
    double ms = cfg.assembly.top.ms, gap = cfg.assembly.surface_gap;
    s.quantity("radius", Dimension::length, radius);
    s.quantity("thickness", Dimension::length, thickness);
    s.quantity("ms", Dimension::field, ms);
    s.quantity("surface_gap", Dimension::length, gap);
    s.finish();
    if (!(ms > 0.0)) throw ConfigError("magnets.ms: must be > 0");
    cfg.assembly = MagnetAssembly::symmetric(radius, thickness, ms, gap);
  }
  if (top.has("finger")) {
    Section s = top.child("finger");
    s.vec3("half_extents", Dimension::length, cfg.finger.half_extents);
    s.vec3("center", Dimension::length, cfg.finger.center);
    s.quantity("chi", Dimension::dimensionless, cfg.finger.chi);
    s.finish();
    cfg.finger.validate();
  }
  if (top.has("sensor")) {
    Section s = top.child("sensor");
    s.vec3("position", Dimension::length, cfg.sensor.position);
    s.vec3("axis", Dimension::dimensionless, cfg.sensor.axis);
    s.quantity("sensitivity", Dimension::sensitivity, cfg.sensor.sensitivity);
    s.quantity("dynamic_range", Dimension::field, cfg.sensor.dynamic_range);
    s.finish();
    if (cfg.sensor.axis.norm() > 0.0) cfg.sensor.axis.normalize();
    cfg.sensor.validate();
  }
  if (top.has("quadrature")) {
    Section s = top.child("quadrature");
    s.integer("radial_nodes", cfg.quadrature.radial_nodes);
    s.integer("angular_nodes", cfg.quadrature.angular_nodes);
    s.integer("volume_nodes_per_axis", cfg.quadrature.volume_nodes_per_axis);
    s.finish();
    cfg.quadrature.validate();
  }
  if (top.has("grid")) {
    Section s = top.child("grid");
    s.range("x_range", Dimension::length, cfg.grid.x_min, cfg.grid.x_max);
    s.range("z_range", Dimension::length, cfg.grid.z_min, cfg.grid.z_max);
    s.integer("nx", cfg.grid.nx);
    s.integer("nz", cfg.grid.nz);
    s.quantity("y_plane", Dimension::length, cfg.grid.y_plane);
    s.finish();
    cfg.grid.validate();
  }
  if (top.has("sweep")) {
    Section s = top.child("sweep");
    s.list("x", Dimension::length, cfg.sweep.x);
    s.list("dz", Dimension::length, cfg.sweep.dz);
    s.list("beta", Dimension::angle, cfg.sweep.beta);
    s.finish();
  }
  if (top.has("blood")) {
    Section s = top.child("blood");
    s.quantity("hct", Dimension::dimensionless, cfg.blood.hct);
    s.quantity("hbo2", Dimension::dimensionless, cfg.blood.hbo2);
    s.quantity("dchi_oxy", Dimension::dimensionless, cfg.blood.dchi_oxy);
    s.quantity("dchi_do", Dimension::dimensionless, cfg.blood.dchi_do);
    s.quantity("chi_water", Dimension::dimensionless, cfg.blood.chi_water);
    s.finish();
    cfg.blood.validate();
  }
  if (top.has("synth")) read_synth(top.child("synth"), cfg.synth);
  if (top.has("pipeline")) read_pipeline(top.child("pipeline"), cfg.pipeline);
  top.finish();
  return cfg;
}

}  // namespace

double parse_quantity(std::string_view text, Dimension dim, std::string_view field) {
  const std::string what(field);
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
  if (ec != std::errc{}) throw ConfigError(what + ": cannot parse number from '" + std::string(text) + "'");
  std::string unit(end, text.data() + text.size());
  unit.erase(0, unit.find_first_not_of(" \t"));
  unit.erase(unit.find_last_not_of(" \t") + 1);
  if (!std::isfinite(value)) throw ConfigError(what + ": value must be finite");
  if (unit.empty()) return value;
  const auto& table = unit_table(dim);
  const auto it = table.find(unit);
  if (it == table.end()) throw ConfigError(what + ": unit '" + unit + "' not accepted here");
  return value * it->second;
}

RunConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < json_text.size(); ++k) {
      if (json_text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + e.what());
  }
  try {
    return from_json(root);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace magpulse
