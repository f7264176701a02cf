#include "magpulse/io.hpp"

#include "magpulse/errors.hpp"

#include <json.hpp>

#include <algorithm>
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

std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t\r"));
  s.erase(s.find_last_not_of(" \t\r") + 1);
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}


// Reads the named columns plus t; returns the sample rate and one vector per column.
std::pair<double, std::vector<std::vector<double>>> read_columns(std::string_view csv,
                                                                 const std::vector<std::string>& names) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace CSV is empty");
  const auto header = split_csv(line);
  auto column = [&header](const char* name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError(std::string("trace CSV: missing column '") + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ct = column("t");
  std::vector<std::size_t> cols;
  for (const auto& n : names) cols.push_back(column(n.c_str()));

  std::vector<double> t;
  std::vector<std::vector<double>> values(names.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    auto get = [&](std::size_t c) {
      if (c >= f.size()) throw ConfigError("trace CSV line " + std::to_string(line_no) + ": too few columns");
      try {
        std::size_t used = 0;
        const double v = std::stod(f[c], &used);
        if (used != f[c].size()) throw std::invalid_argument("trailing");
        return v;
      } catch (const std::exception&) {
        throw ConfigError("trace CSV line " + std::to_string(line_no) + ": bad number '" + f[c] + "'");
      }
    };
    t.push_back(get(ct));
    for (std::size_t k = 0; k < cols.size(); ++k) values[k].push_back(get(cols[k]));
  }
  if (t.size() < 2) throw ConfigError("trace CSV needs at least two rows");
  std::vector<double> dt;
  for (std::size_t i = 1; i < t.size(); ++i) dt.push_back(t[i] - t[i - 1]);
  std::nth_element(dt.begin(), dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2), dt.end());
  const double step = dt[dt.size() / 2];
  if (!(step > 0.0)) throw ConfigError("trace CSV: time column must increase");
  double fs = 1.0 / step;
  // Time stamps written as i / fs lose the exact rate in the last digits.
  if (std::abs(fs - std::round(fs)) < 1e-6 * fs) fs = std::round(fs);
  return {fs, std::move(values)};
}

}  // namespace

std::string traces_to_csv(const dsp::PulseTrace& magnetic, const dsp::PulseTrace& vibration) {
  if (magnetic.samples.size() != vibration.samples.size() || magnetic.fs != vibration.fs) {
    throw ConfigError("traces differ in length or sample rate");
  }
  std::ostringstream out;
  out << "t,magnetic,vibration\n";
  for (std::size_t i = 0; i < magnetic.samples.size(); ++i) {
    out << full(static_cast<double>(i) / magnetic.fs) << ',' << full(magnetic.samples[i]) << ','
        << full(vibration.samples[i]) << '\n';
  }
  return out.str();
}


std::string trace_to_csv(const dsp::PulseTrace& trace) {
  std::ostringstream out;
  out << "t,value\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    out << full(static_cast<double>(i) / trace.fs) << ',' << full(trace.samples[i]) << '\n';
  }
  return out.str();
}

dsp::PulseTrace parse_trace_csv(std::string_view csv, dsp::Channel channel) {
  auto [fs, cols] = read_columns(csv, {"value"});
  return {std::move(cols[0]), fs, channel};
}

std::pair<dsp::PulseTrace, dsp::PulseTrace> parse_traces_csv(std::string_view csv) {
  auto [fs, cols] = read_columns(csv, {"magnetic", "vibration"});
  return {dsp::PulseTrace{std::move(cols[0]), fs, dsp::Channel::magnetic},
          dsp::PulseTrace{std::move(cols[1]), fs, dsp::Channel::vibration}};
}

std::string template_to_csv(const dsp::PulseTemplate& magnetic, const dsp::PulseTemplate& vibration) {
  std::ostringstream out;
  out << "index,t_s,magnetic,vibration\n";
  const double dt = magnetic.period_s / static_cast<double>(magnetic.samples.size());
  for (std::size_t k = 0; k < magnetic.samples.size(); ++k) {
    const double t = -0.3 * magnetic.period_s + dt * static_cast<double>(k);
    out << k << ',' << full(t) << ',' << full(magnetic.samples[k]) << ',' << full(vibration.samples[k]) << '\n';
  }
  return out.str();
}

std::string segment_templates_to_csv(const dsp::PipelineResult& result) {
  std::ostringstream out;
  out << "segment,index,t_s,magnetic,vibration\n";
  for (const auto& seg : result.segments) {
    const auto& m = seg.magnetic_template;
    const double dt = m.period_s / static_cast<double>(m.samples.size());
    for (std::size_t k = 0; k < m.samples.size(); ++k) {
      out << seg.index << ',' << k << ',' << full(-0.3 * m.period_s + dt * static_cast<double>(k)) << ','
          << full(m.samples[k]) << ',' << full(seg.vibration_template.samples[k]) << '\n';
    }
  }
  return out.str();
}

std::string report_to_json(const dsp::PipelineResult& result) {
  const auto& ba = result.bland_altman;
  nlohmann::ordered_json j;
  j["bias"] = ba.bias;
  j["sd"] = ba.sd;
  j["loa_lower"] = ba.loa_lower;
  j["loa_upper"] = ba.loa_upper;
  j["pct_within_loa"] = ba.pct_within_loa;
  j["max_deviation_pct"] = ba.max_deviation_pct;
  j["mean_deviation_pct"] = ba.mean_deviation_pct;
  j["n_points"] = ba.n_points;
  j["n_pulses"] = ba.n_pulses;
  j["r_trace"] = result.r_trace;
  j["r_template"] = result.r_template;
  j["heart_rate_bpm"] = result.heart_rate_bpm;
  j["vibration_heart_rate_bpm"] = result.vibration_heart_rate_bpm;
  j["n_segments"] = result.segments.size();
  return j.dump(2) + "\n";
}

}  // namespace magpulse::io
