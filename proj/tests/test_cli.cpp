#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <vector>

#include "commands.hpp"
#include "packetgrid/errors.hpp"
#include "packetgrid/scenario_io.hpp"

using namespace packetgrid;
using namespace packetgrid::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = PACKETGRID_SCENARIOS;
const fs::path kData = PACKETGRID_TEST_DATA;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "packetgrid");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("packetgrid-cli-" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Cli, ValidateAcceptsBundledScenario) {
  const auto r = invoke({"validate", (kScenarios / "two_villages.json").string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("ok"), std::string::npos);
}

TEST(Cli, ValidationErrorsExitOneWithPointers) {
  const fs::path dir = scratch("invalid");
  fs::create_directories(dir);
  write_file(dir / "s.json", R"({"horizon_slots": 0, "microgrids": []})");
  const auto r = invoke({"validate", (dir / "s.json").string()});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("/horizon_slots"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("/microgrids"), std::string::npos) << r.err;
  fs::remove_all(dir);
}

TEST(Cli, MalformedJsonExitsOne) {
  const fs::path dir = scratch("malformed");
  fs::create_directories(dir);
  write_file(dir / "s.json", "{\"horizon_slots\": ");
  const auto r = invoke({"simulate", (dir / "s.json").string()});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("JSON parse error"), std::string::npos) << r.err;
  fs::remove_all(dir);
}

TEST(Cli, MissingScenarioFileExitsThree) {
  EXPECT_EQ(invoke({"validate", "/nonexistent/s.json"}).code, kExitIo);
  EXPECT_EQ(invoke({"simulate", "/nonexistent/s.json"}).code, kExitIo);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(invoke({}).code, kExitValidation);
  EXPECT_EQ(invoke({"simulate"}).code, kExitValidation);
  EXPECT_EQ(invoke({"simulate", "x.json", "--mode", "chaos"}).code, kExitValidation);
  EXPECT_EQ(invoke({"sweep", (kScenarios / "two_villages.json").string(), "--seeds", "5..1"}).code, kExitValidation);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(invoke({"--help"}).code, kExitOk); }

TEST(Cli, SimulatePrintsSummaryAndWritesBundle) {
  const fs::path out = scratch("bundle");
  const auto r = invoke({"simulate", (kData / "tiny.json").string(), "--out", out.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "self_sufficiency=1.000000 unserved_wh=0 blocking_rate=0.000000\n");
  EXPECT_EQ(read_file(out / "metrics.csv"), read_file(kData / "tiny.metrics.csv"));
  fs::remove_all(out);
}

TEST(Cli, SeedAndModeOverridesApply) {
  const auto scenario = (kScenarios / "two_villages.json").string();
  const auto commons = invoke({"simulate", scenario, "--seed", "3"});
  const auto baseline = invoke({"simulate", scenario, "--seed", "3", "--mode", "uncoordinated"});
  EXPECT_EQ(commons.code, kExitOk);
  EXPECT_EQ(baseline.code, kExitOk);
  EXPECT_NE(commons.out, baseline.out);
}

TEST(Cli, UnwritableOutputExitsThreeAndLeavesNothing) {
  const fs::path blocker = scratch("blocker");
  write_file(blocker, "file in the way");
  const auto r = invoke({"simulate", (kData / "tiny.json").string(), "--out", (blocker / "sub").string()});
  EXPECT_EQ(r.code, kExitIo) << r.err;
  EXPECT_FALSE(fs::exists(blocker / "sub"));
  fs::remove_all(blocker);
}

TEST(Cli, SweepWritesCsvAndSummary) {
  const fs::path out = scratch("sweep");
  const auto r = invoke({"sweep", (kData / "tiny.json").string(), "--seeds", "0..2", "--jobs", "2", "--out",
                      out.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto csv = read_file(out / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 2);
  EXPECT_TRUE(fs::exists(out / "sweep_summary.txt"));
  fs::remove_all(out);
}

TEST(ExitCodeFor, MapsErrorKinds) {
  EXPECT_EQ(exit_code_for(InvariantFailure("x")), kExitInvariant);
  EXPECT_EQ(exit_code_for(ProtocolViolation("x")), kExitInvariant);
  EXPECT_EQ(exit_code_for(IoError("x")), kExitIo);
  EXPECT_EQ(exit_code_for(ConfigError("x")), kExitValidation);
  EXPECT_EQ(exit_code_for(InfeasibleRequestError("x")), kExitValidation);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), kExitInvariant);
}
