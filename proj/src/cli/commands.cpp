#include "magpulse/cli.hpp"

#include "magpulse/config.hpp"
#include "magpulse/dsp/pipeline.hpp"
#include "magpulse/dsp/synth.hpp"
#include "magpulse/errors.hpp"
#include "magpulse/io.hpp"
#include "magpulse/placement.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace magpulse::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> dz, beta, dchi;
  std::string grid;
  std::string format = "csv";
  std::string input;
};

// Files produced by a command, written only once everything has been computed.
using Outputs = std::vector<std::pair<std::string, std::string>>;

RunConfig load(const Options& o) {
  return o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
}

void apply_grid_flag(const std::string& flag, GridSpec& grid) {
  if (flag.empty()) return;
  const auto comma = flag.find(',');
  if (comma == std::string::npos) throw ConfigError("--grid expects NX,NZ");
  try {
    std::size_t a = 0, b = 0;
    const std::string sx = flag.substr(0, comma), sz = flag.substr(comma + 1);
    grid.nx = std::stoi(sx, &a);
    grid.nz = std::stoi(sz, &b);
    if (a != sx.size() || b != sz.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("--grid expects NX,NZ, got '" + flag + "'");
  }
  grid.validate();
}

std::string grid_output(const SensitivityGrid& g, const std::string& format) {
  return format == "json" ? io::grid_to_json(g) : io::grid_to_csv(g);
}

Outputs cmd_field(const Options& o, RunConfig& cfg) {
  apply_grid_flag(o.grid, cfg.grid);
  const auto grid = scan_sensitivity(cfg.assembly, cfg.finger, cfg.sensor, cfg.grid, {}, cfg.quadrature);
  return {{"field." + o.format, grid_output(grid, o.format)}};
}

Outputs cmd_perturb(const Options& o, RunConfig& cfg) {
  const int count = o.dz.has_value() + o.beta.has_value() + o.dchi.has_value();
  if (count != 1) throw ConfigError("perturb needs exactly one of --dz, --beta, --dchi");
  apply_grid_flag(o.grid, cfg.grid);
  PerturbationSet p;
  std::string name;
  if (o.dz) {
    p.dz = *o.dz;
    name = "perturb_dz";
  } else if (o.beta) {
    p.angles.beta = *o.beta;
    name = "perturb_beta";
  } else {
    p.dchi = *o.dchi;
    name = "perturb_dchi";
  }
  const auto grid = scan_sensitivity(cfg.assembly, cfg.finger, cfg.sensor, cfg.grid, p, cfg.quadrature);
  Outputs files{{name + "." + o.format, grid_output(grid, o.format)}};
  if (o.dz) files.emplace_back("ranking.csv", io::ranking_to_csv(rank_placements(grid, 20), cfg.sensor));
  return files;
}

Outputs cmd_sweep(const Options&, RunConfig& cfg) {
  const auto rows = dipole_validity_sweep(cfg.assembly, cfg.sensor, cfg.sweep.x, cfg.sweep.dz, cfg.sweep.beta,
                                          cfg.quadrature);
  return {{"sweep_displacement.csv", io::sweep_to_csv(rows, SweepMode::displacement)},
          {"sweep_rotation.csv", io::sweep_to_csv(rows, SweepMode::rotation)}};
}

Outputs cmd_synth(const Options&, RunConfig& cfg) {
  const auto [mag, vib] = dsp::synth_pulse_train(cfg.synth);
  return {{"traces.csv", io::traces_to_csv(mag, vib)}};
}

Outputs cmd_analyze(const Options& o, RunConfig& cfg) {
  if (o.input.empty()) throw ConfigError("analyze needs --input FILE");
  std::string text;
  try {
    text = io::read_file(o.input);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  auto [mag, vib] = [&] {
    try {
      return io::parse_traces_csv(text);
    } catch (const ConfigError& e) {
      throw ConfigError(o.input + ": " + e.what());
    }
  }();
  const auto result = dsp::run_pipeline(mag, vib, cfg.pipeline);
  return {{"templates.csv", io::template_to_csv(result.magnetic_template, result.vibration_template)},
          {"acceleration.csv", io::template_to_csv(result.magnetic_acceleration, result.vibration_acceleration)},
          {"segment_templates.csv", io::segment_templates_to_csv(result)},
          {"report.json", io::report_to_json(result)}};
}

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_outputs(const std::string& command, const Options& o, const RunConfig& cfg, const Outputs& files,
                   double wall_s) {
  fs::create_directories(o.out_dir);
  nlohmann::ordered_json manifest;
  manifest["command"] = command;
  manifest["config"] = o.config_path.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(o.config_path);
  manifest["out_dir"] = o.out_dir;
  // Only synth draws random numbers.
  manifest["seed"] = command == "synth" ? nlohmann::ordered_json(cfg.synth.seed) : nlohmann::ordered_json(nullptr);
  manifest["version"] = MAGPULSE_VERSION;
  nlohmann::ordered_json listed = nlohmann::ordered_json::array();
  for (const auto& [name, content] : files) {
    io::write_file_atomic((fs::path(o.out_dir) / name).string(), content);
    listed.push_back({{"name", name}, {"bytes", content.size()}, {"fnv1a", hex(io::fnv1a(content))}});
  }
  manifest["files"] = listed;
  manifest["wall_time_s"] = wall_s;
  io::write_file_atomic((fs::path(o.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--out", o.out_dir, "output directory (created if missing)");
  sub->add_option("--seed", o.seed, "RNG seed for synthetic data");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Magnet-pair pulse sensor modelling and analysis", "magpulse"};
  app.set_version_flag("--version", MAGPULSE_VERSION);
  app.require_subcommand(1);
  Options o;

  auto* field = app.add_subcommand("field", "static field map on the xz plane");
  add_common(field, o);
  field->add_option("--grid", o.grid, "grid size NX,NZ");
  field->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

  auto* perturb = app.add_subcommand("perturb", "field change for one top-magnet or finger perturbation");
  add_common(perturb, o);
  perturb->add_option("--dz", o.dz, "top-magnet vertical shift, m");
  perturb->add_option("--beta", o.beta, "top-magnet pitch, rad");
  perturb->add_option("--dchi", o.dchi, "finger susceptibility change");
  perturb->add_option("--grid", o.grid, "grid size NX,NZ");
  perturb->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

  auto* sweep = app.add_subcommand("sweep", "dipole closed forms against the finite-magnet solver");
  add_common(sweep, o);

  auto* synth = app.add_subcommand("synth", "synthetic two-channel pulse recording");
  add_common(synth, o);

  auto* analyze = app.add_subcommand("analyze", "segment, filter, average and compare two channels");
  add_common(analyze, o);
  analyze->add_option("--input", o.input, "two-channel CSV (t,magnetic,vibration)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  const std::vector<std::pair<CLI::App*, Outputs (*)(const Options&, RunConfig&)>> commands{
      {field, cmd_field}, {perturb, cmd_perturb}, {sweep, cmd_sweep}, {synth, cmd_synth}, {analyze, cmd_analyze}};
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [sub, fn] : commands) {
    if (!sub->parsed()) continue;
    const std::string name = sub->get_name();
    Outputs files;
    RunConfig cfg;
    try {
      cfg = load(o);
      if (o.seed) cfg.synth.seed = *o.seed;
      files = fn(o, cfg);
    } catch (const ConfigError& e) {
      err << "magpulse " << name << ": config error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const DomainError& e) {
      err << "magpulse " << name << ": numeric error: " << e.what() << '\n';
      return kExitDomain;
    } catch (const std::exception& e) {
      err << "magpulse " << name << ": " << e.what() << '\n';
      return kExitDomain;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
      write_outputs(name, o, cfg, files, wall);
    } catch (const std::exception& e) {
      err << "magpulse " << name << ": cannot write output: " << e.what() << '\n';
      return kExitIo;
    }
    for (const auto& f : files) out << (fs::path(o.out_dir) / f.first).string() << '\n';
    return kExitOk;
  }
  return kExitConfig;
}

}  // namespace magpulse::cli
