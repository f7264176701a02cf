#include "magpulse/config.hpp"
#include "magpulse/errors.hpp"
#include "magpulse/units.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

using namespace magpulse;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("quantities with units") {
  CHECK(parse_quantity("5 mm", Dimension::length, "f") == doctest::Approx(5e-3).epsilon(1e-15));
  CHECK(parse_quantity("50um", Dimension::length, "f") == doctest::Approx(50e-6).epsilon(1e-15));
  CHECK(parse_quantity("50 \xC2\xB5m", Dimension::length, "f") == doctest::Approx(50e-6).epsilon(1e-15));
  CHECK(parse_quantity("2 cm", Dimension::length, "f") == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(parse_quantity("0.012", Dimension::length, "f") == 0.012);
  CHECK(parse_quantity("962.9 kA/m", Dimension::field, "f") == doctest::Approx(962.9e3).epsilon(1e-15));
  CHECK(parse_quantity("100 Oe", Dimension::field, "f") == doctest::Approx(1e5 / (4 * std::numbers::pi)).epsilon(1e-14));
  CHECK(parse_quantity("1 Oe", Dimension::field, "f") == doctest::Approx(79.57747154594767).epsilon(1e-14));
  CHECK(parse_quantity("1.28 mV/Oe", Dimension::sensitivity, "f") ==
        doctest::Approx(1.28e-3 * 4 * std::numbers::pi / 1e3).epsilon(1e-14));
  CHECK(parse_quantity("3.3 mrad", Dimension::angle, "f") == doctest::Approx(3.3e-3).epsilon(1e-15));
  CHECK(parse_quantity("180 deg", Dimension::angle, "f") == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(parse_quantity("0.8 Hz", Dimension::frequency, "f") == 0.8);
  CHECK(parse_quantity("-1e-7", Dimension::dimensionless, "f") == -1e-7);

  CHECK_THROWS_AS(parse_quantity("5 Oe", Dimension::length, "f"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("five mm", Dimension::length, "f"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("3 mm", Dimension::dimensionless, "f"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("", Dimension::length, "f"), ConfigError);
  try {
    parse_quantity("5 Oe", Dimension::length, "magnets.radius");
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), "magnets.radius"));
    CHECK(contains(e.what(), "Oe"));
  }
}

TEST_CASE("unit conversions round trip") {
  for (double oe : {-100.0, 0.5, 1.0, 1e-5}) {
    CHECK(units::oersted_from_si(units::si_from_oersted(oe)) == doctest::Approx(oe).epsilon(1e-15));
  }
  CHECK(units::mv_per_oe_from_volts_per_si(units::volts_per_si_from_mv_per_oe(1.28)) ==
        doctest::Approx(1.28).epsilon(1e-15));
}

TEST_CASE("empty config gives the reference device") {
  const RunConfig c = parse_config("{}");
  CHECK(c.assembly.top.radius == 5e-3);
  CHECK(c.assembly.top.thickness == 5e-3);
  CHECK(c.assembly.top.ms == 962.9e3);
  CHECK(c.assembly.surface_gap == doctest::Approx(9e-3));
  CHECK(c.assembly.top.center.z() == doctest::Approx(7e-3));
  CHECK(c.assembly.bottom.center.z() == doctest::Approx(-7e-3));
  CHECK(c.sensor.dynamic_range == doctest::Approx(units::si_from_oersted(100.0)));
  CHECK(c.sensor.sensitivity == doctest::Approx(units::volts_per_si_from_mv_per_oe(1.28)));
  CHECK(c.quadrature.radial_nodes == 16);
  CHECK(c.quadrature.angular_nodes == 48);
  CHECK(c.synth.heart_rate_bpm == 72.0);
  CHECK(c.pipeline.segment_s == 30.0);
  CHECK(c.pipeline.f_lo == 0.8);
  CHECK(c.pipeline.f_hi == 10.0);
  CHECK(c.pipeline.fs == 240.0);
}

TEST_CASE("sections override defaults") {
  const RunConfig c = parse_config(R"({
    "magnets": {"radius": "4 mm", "thickness": 0.006, "ms": "1000 kA/m", "surface_gap": "10 mm"},
    "sensor": {"position": ["20 mm", 0, "5 mm"], "axis": [2, 0, 0], "dynamic_range": "50 Oe"},
    "grid": {"x_range": ["10 mm", "20 mm"], "z_range": [0, "8 mm"], "nx": 11, "nz": 9},
    "sweep": {"x": ["15 mm"], "dz": ["10 um", "20 um"], "beta": ["1 mrad"]},
    "synth": {"heart_rate_bpm": 60, "seed": 42, "systolic": {"center": 0.2},
              "runoff": {"amplitude": 0}},
    "pipeline": {"band": ["1 Hz", "8 Hz"], "max_pulses_per_segment": 20}
  })");
  CHECK(c.assembly.top.radius == doctest::Approx(4e-3));
  CHECK(c.assembly.top.thickness == 0.006);
  CHECK(c.assembly.top.ms == doctest::Approx(1e6));
  CHECK(c.assembly.bottom.ms == doctest::Approx(1e6));
  CHECK(c.assembly.top.center.z() == doctest::Approx(8e-3));
  CHECK(c.sensor.position.x() == doctest::Approx(0.02));
  CHECK(c.sensor.axis.x() == 1.0);
  CHECK(c.sensor.dynamic_range == doctest::Approx(units::si_from_oersted(50.0)));
  CHECK(c.grid.nx == 11);
  CHECK(c.grid.x_min == doctest::Approx(0.01));
  CHECK(c.grid.z_max == doctest::Approx(0.008));
  CHECK(c.sweep.dz.size() == 2u);
  CHECK(c.sweep.beta.front() == doctest::Approx(1e-3));
  CHECK(c.synth.seed == 42u);
  CHECK(c.synth.systolic.center == 0.2);
  CHECK(c.synth.systolic.width == 0.055);
  CHECK(c.synth.runoff.amplitude == 0.0);
  CHECK(c.pipeline.f_lo == 1.0);
  CHECK(c.pipeline.f_hi == 8.0);
  CHECK(c.pipeline.max_pulses_per_segment == 20);
}

TEST_CASE("unknown keys are reported with their path") {
  CHECK(contains(error_of(R"({"magnet": {}})"), "magnet: unknown key"));
  CHECK(contains(error_of(R"({"synth": {"heartrate": 70}})"), "synth.heartrate"));
  CHECK(contains(error_of(R"({"synth": {"systolic": {"centre": 0.2}}})"), "synth.systolic.centre"));
}

TEST_CASE("syntax errors carry line and column") {
  const std::string msg = error_of("{\n  \"magnets\": {\n    \"radius\": ,\n  }\n}");
  CHECK(contains(msg, "line 3"));
  CHECK(contains(msg, "column 15"));
}

TEST_CASE("out-of-range values are rejected") {
  for (const char* text : {
           R"({"magnets": {"radius": "-1 mm"}})",
           R"({"magnets": {"ms": 0}})",
           R"({"quadrature": {"radial_nodes": 0}})",
           R"({"quadrature": {"radial_nodes": 2.5}})",
           R"({"grid": {"nx": 1}})",
           R"({"grid": {"x_range": ["20 mm", "10 mm"]}})",
           R"({"grid": {"x_range": ["20 mm"]}})",
           R"({"sensor": {"axis": [0, 0, 0]}})",
           R"({"sensor": {"position": [0, 0]}})",
           R"({"synth": {"heart_rate_bpm": 20}})",
           R"({"synth": {"diastolic": {"center": 1.0}}})",
           R"({"pipeline": {"band": ["10 Hz", "1 Hz"]}})",
           R"({"pipeline": {"band": ["1 Hz", "200 Hz"]}})",
           R"({"blood": {"hct": 1.5}})",
           R"({"magnets": []})",
           R"({"magnets": {"radius": true}})",
       }) {
    INFO(text);
    CHECK_THROWS_AS(parse_config(text), ConfigError);
  }
}

TEST_CASE("load_config names the file") {
  const std::string path = "test_config_tmp.json";
  {
    std::ofstream out(path);
    out << R"({"synth": {"seed": 7}})";
  }
  CHECK(load_config(path).synth.seed == 7u);
  {
    std::ofstream out(path);
    out << R"({"synth": {"sed": 7}})";
  }
  try {
    load_config(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), path));
    CHECK(contains(e.what(), "synth.sed"));
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("does/not/exist.json"), ConfigError);
}
