#include "commands.hpp"

#include <cstdlib>
#include <memory>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "packetgrid/engine.hpp"
#include "packetgrid/errors.hpp"
#include "packetgrid/report.hpp"
#include "packetgrid/scenario_io.hpp"
#include "packetgrid/sweep.hpp"

namespace packetgrid::cli {

namespace {

void print_diagnostics(const std::filesystem::path& path, const std::vector<Diagnostic>& diags, std::ostream& err) {
  for (const auto& d : diags) {
    err << path.string() << ": " << (d.pointer.empty() ? "/" : d.pointer) << ": " << d.message << "\n";
  }
}

// Loads a scenario, reporting diagnostics. Returns nullopt with `code` set on failure.
std::optional<Scenario> load(const std::filesystem::path& path, std::ostream& err, int& code) {
  try {
    ScenarioLoad loaded = load_scenario(path);
    if (!loaded.scenario) {
      print_diagnostics(path, loaded.diagnostics, err);
      code = kExitValidation;
      return std::nullopt;
    }
    return std::move(loaded.scenario);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    code = kExitIo;
    return std::nullopt;
  }
}

spdlog::level::level_enum log_level_from_env() {
  const char* v = std::getenv("PACKETGRID_LOG");
  if (v == nullptr) return spdlog::level::warn;
  const std::string s(v);
  if (s == "error") return spdlog::level::err;
  if (s == "info") return spdlog::level::info;
  if (s == "debug") return spdlog::level::debug;
  return spdlog::level::warn;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const InvariantFailure*>(&e) || dynamic_cast<const ProtocolViolation*>(&e)) return kExitInvariant;
  if (dynamic_cast<const Error*>(&e)) return kExitValidation;
  return kExitInvariant;
}

int cmd_validate(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto sc = load(scenario, err, code);
  if (!sc) return code;
  out << scenario.string() << ": ok (" << sc->microgrids.size() << " microgrids, " << sc->horizon_slots
      << " slots)\n";
  return kExitOk;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto sc = load(options.scenario, err, code);
  if (!sc) return code;
  if (options.mode) sc->mode = *options.mode;
  try {
    spdlog::info("simulating {} ({} mode, {} slots)", sc->name, to_string(sc->mode), sc->horizon_slots);
    const RunResult result = run(*sc, options.seed);
    if (options.out_dir) {
      write_report_bundle(result, *options.out_dir);
      spdlog::info("report written to {}", options.out_dir->string());
    }
    out << summary_line(result) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
  SeedRange seeds;
  std::vector<Mode> modes;
  try {
    seeds = parse_seed_range(options.seeds);
    modes = parse_modes(options.modes);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  int code = kExitOk;
  auto sc = load(options.scenario, err, code);
  if (!sc) return code;
  try {
    spdlog::info("sweeping seeds {}..{} with {} job(s)", seeds.first, seeds.last, options.jobs);
    const SweepResult result = run_sweep(*sc, seeds, modes, options.jobs);
    const std::string csv = sweep_csv(result);
    const std::string summary = sweep_summary(result);
    if (options.out_dir) {
      std::filesystem::create_directories(*options.out_dir);
      write_file(*options.out_dir / "sweep.csv", csv);
      write_file(*options.out_dir / "sweep_summary.txt", summary);
      out << summary;
    } else {
      out << csv;
    }
    for (const auto& row : result.rows) {
      if (!row.ok) err << "seed " << row.seed << " (" << to_string(row.mode) << ") failed: " << row.error << "\n";
    }
    return result.failures() == 0 ? kExitOk : kExitInvariant;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

void configure_logging() {
  if (!spdlog::get("packetgrid")) {
    spdlog::set_default_logger(spdlog::stderr_logger_mt("packetgrid"));
  }
  spdlog::set_level(log_level_from_env());
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"Packetized energy sharing simulator for linked microgrids"};
  app.require_subcommand(1);

  std::string scenario;
  auto* validate = app.add_subcommand("validate", "Check a scenario file and its traces");
  validate->add_option("scenario", scenario, "Scenario JSON file")->required();

  SimulateOptions sim;
  std::string sim_mode;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write a report bundle");
  simulate->add_option("scenario", scenario, "Scenario JSON file")->required();
  simulate->add_option("--seed", sim.seed, "Override the scenario seed");
  simulate->add_option("--mode", sim_mode, "commons or uncoordinated")
      ->check(CLI::IsMember({"commons", "uncoordinated"}));
  simulate->add_option("--out", sim_out, "Output directory for the report bundle");

  SweepOptions sw;
  std::string sw_out;
  auto* sweep = app.add_subcommand("sweep", "Run a seed range in one or both modes");
  sweep->add_option("scenario", scenario, "Scenario JSON file")->required();
  sweep->add_option("--seeds", sw.seeds, "Inclusive seed range a..b")->required();
  sweep->add_option("--modes", sw.modes, "commons, uncoordinated or both")
      ->check(CLI::IsMember({"commons", "uncoordinated", "both"}));
  sweep->add_option("--out", sw_out, "Output directory for sweep.csv");
  sweep->add_option("--jobs", sw.jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  if (validate->parsed()) return cmd_validate(scenario, out, err);
  if (simulate->parsed()) {
    sim.scenario = scenario;
    if (!sim_mode.empty()) sim.mode = parse_mode(sim_mode);
    if (!sim_out.empty()) sim.out_dir = sim_out;
    return cmd_simulate(sim, out, err);
  }
  sw.scenario = scenario;
  if (!sw_out.empty()) sw.out_dir = sw_out;
  return cmd_sweep(sw, out, err);
}

}  // namespace packetgrid::cli
