#pragma once

// Command implementations behind the packetgrid executable. Each returns the
// process exit code and writes only to the given streams and output paths.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "packetgrid/scenario.hpp"

namespace packetgrid::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitInvariant = 2,
  kExitIo = 3,
};

/// IoError -> 3, InvariantFailure or ProtocolViolation -> 2, other library
/// errors -> 1, anything unexpected -> 2.
int exit_code_for(const std::exception& e);

int cmd_validate(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);

struct SimulateOptions {
  std::filesystem::path scenario;
  std::optional<std::uint64_t> seed;
  std::optional<Mode> mode;
  std::optional<std::filesystem::path> out_dir;
};

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

struct SweepOptions {
  std::filesystem::path scenario;
  std::string seeds;
  std::string modes = "both";
  std::optional<std::filesystem::path> out_dir;
  unsigned jobs = 1;
};

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

/// Routes log output to stderr at the level named by PACKETGRID_LOG
/// (error, warn, info, debug; default warn).
void configure_logging();

/// Parses the command line and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace packetgrid::cli
