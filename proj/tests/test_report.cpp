#include <gtest/gtest.h>

#include <filesystem>

#include <nlohmann/json.hpp>

#include "packetgrid/engine.hpp"
#include "packetgrid/errors.hpp"
#include "packetgrid/generators.hpp"
#include "packetgrid/report.hpp"
#include "packetgrid/scenario_io.hpp"

using namespace packetgrid;
namespace fs = std::filesystem;

namespace {

const fs::path kData = PACKETGRID_TEST_DATA;

RunResult tiny() { return run(load_scenario_or_throw(kData / "tiny.json")); }

}  // namespace

TEST(FormatRatio, SixDecimals) {
  EXPECT_EQ(format_ratio(0.75), "0.750000");
  EXPECT_EQ(format_ratio(1.0), "1.000000");
  EXPECT_EQ(format_ratio(1.0 / 3.0), "0.333333");
}

TEST(Golden, MetricsCsv) { EXPECT_EQ(metrics_csv(tiny()), read_file(kData / "tiny.metrics.csv")); }

TEST(Golden, TransfersCsv) { EXPECT_EQ(transfers_csv(tiny()), read_file(kData / "tiny.transfers.csv")); }

TEST(Golden, RunJson) { EXPECT_EQ(run_json(tiny()), read_file(kData / "tiny.run.json")); }

TEST(RunJson, CarriesSchemaVersionAndConservation) {
  const auto doc = nlohmann::json::parse(run_json(run(fuzz_scenario(8))));
  EXPECT_EQ(doc.at("schema_version"), kReportSchemaVersion);
  EXPECT_TRUE(doc.at("community_conserved").get<bool>());
  EXPECT_TRUE(doc.at("config").contains("seed"));
}

TEST(Determinism, RepeatedRunsGiveIdenticalBytes) {
  for (std::uint64_t seed : {3u, 21u}) {
    const auto sc = fuzz_scenario(seed);
    const auto a = run(sc);
    const auto b = run(sc);
    EXPECT_EQ(metrics_csv(a), metrics_csv(b));
    EXPECT_EQ(run_json(a), run_json(b));
    EXPECT_EQ(transfers_csv(a), transfers_csv(b));
    EXPECT_EQ(ledger_csv(a), ledger_csv(b));
  }
}

TEST(SummaryLine, ZeroDemandReportsFullSelfSufficiency) {
  Scenario sc;
  sc.horizon_slots = 4;
  sc.slots_per_day = 4;
  MicrogridSpec mg;
  mg.microgrid_id = "a";
  mg.generation.push_back({"pv", {5, 5, 5, 5}});
  sc.microgrids.push_back(mg);
  EXPECT_EQ(summary_line(run(sc)), "self_sufficiency=1.000000 unserved_wh=0 blocking_rate=0.000000");
}

TEST(ReportBundle, WritesAllFiles) {
  const fs::path dir = fs::temp_directory_path() / "packetgrid-report-bundle";
  fs::remove_all(dir);
  const auto r = tiny();
  write_report_bundle(r, dir / "nested");
  for (const char* f : {"run.json", "metrics.csv", "transfers.csv", "ledger.csv", "summary.txt"}) {
    EXPECT_TRUE(fs::exists(dir / "nested" / f)) << f;
  }
  EXPECT_EQ(read_file(dir / "nested" / "metrics.csv"), metrics_csv(r));
  fs::remove_all(dir);
}

TEST(ReportBundle, UnwritableTargetIsAnIoError) {
  const fs::path blocker = fs::temp_directory_path() / "packetgrid-report-blocker";
  fs::remove_all(blocker);
  write_file(blocker, "not a directory");
  EXPECT_THROW(write_report_bundle(tiny(), blocker), IoError);
  fs::remove_all(blocker);
}
