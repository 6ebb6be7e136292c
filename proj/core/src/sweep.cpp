#include "packetgrid/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <thread>

#include "packetgrid/engine.hpp"
#include "packetgrid/errors.hpp"
#include "packetgrid/report.hpp"

namespace packetgrid {

SeedRange parse_seed_range(std::string_view text) {
  const auto dots = text.find("..");
  auto num = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
      throw ConfigError("invalid seed range '" + std::string(text) + "' (expected a..b)");
    }
    return v;
  };
  if (dots == std::string_view::npos) throw ConfigError("invalid seed range '" + std::string(text) + "' (expected a..b)");
  SeedRange r{num(text.substr(0, dots)), num(text.substr(dots + 2))};
  if (r.last < r.first) throw ConfigError("empty seed range '" + std::string(text) + "'");
  return r;
}

std::vector<Mode> parse_modes(std::string_view text) {
  if (text == "both") return {Mode::Commons, Mode::Uncoordinated};
  return {parse_mode(text)};
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok; }));
}

namespace {

SweepRow summarize(std::uint64_t seed, Mode mode, const RunResult& r) {
  SweepRow row;
  row.seed = seed;
  row.mode = mode;
  row.ok = true;
  const auto& c = r.metrics.community;
  row.self_sufficiency = c.self_sufficiency;
  Wh consumption = 0;
  Wh imports = 0;
  for (const auto& m : r.metrics.microgrids) {
    consumption += m.consumption_wh;
    imports += m.imports_wh;
  }
  row.microgrid_self_sufficiency =
      consumption > 0 ? std::clamp(static_cast<double>(consumption - imports) / static_cast<double>(consumption), 0.0, 1.0)
                      : 1.0;
  row.unserved_wh = c.unserved_energy_wh;
  row.blocking_rate = c.packet_blocking_rate;
  row.imports_wh = imports;
  row.link_losses_wh = r.metrics.link_losses_wh;
  row.fairness = c.fairness;
  row.network_cost_proxy = c.network_cost_proxy;
  return row;
}

}  // namespace

SweepResult run_sweep(const Scenario& scenario, SeedRange seeds, const std::vector<Mode>& modes, unsigned jobs) {
  if (seeds.last < seeds.first) throw ConfigError("empty seed range");
  if (modes.empty()) throw ConfigError("no modes to sweep");

  std::vector<Scenario> per_mode;
  for (Mode m : modes) {
    per_mode.push_back(scenario);
    per_mode.back().mode = m;
  }
  const std::uint64_t n_seeds = seeds.last - seeds.first + 1;
  const std::size_t total = static_cast<std::size_t>(n_seeds) * modes.size();
  SweepResult out;
  out.rows.resize(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::uint64_t seed = seeds.first + i / modes.size();
      const std::size_t m = i % modes.size();
      try {
        out.rows[i] = summarize(seed, modes[m], run(per_mode[m], seed));
      } catch (const std::exception& e) {
        out.rows[i].seed = seed;
        out.rows[i].mode = modes[m];
        out.rows[i].ok = false;
        out.rows[i].error = e.what();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::size_t>(total, 256))));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::map<std::uint64_t, std::pair<SweepRow*, SweepRow*>> pairs;
  for (auto& row : out.rows) {
    if (!row.ok) continue;
    auto& slot = pairs[row.seed];
    (row.mode == Mode::Commons ? slot.first : slot.second) = &row;
  }
  for (auto& [seed, pair] : pairs) {
    auto [commons, uncoordinated] = pair;
    if (commons == nullptr || uncoordinated == nullptr) continue;
    const Wh du = commons->unserved_wh - uncoordinated->unserved_wh;
    const double ds = commons->microgrid_self_sufficiency - uncoordinated->microgrid_self_sufficiency;
    for (SweepRow* r : {commons, uncoordinated}) {
      r->diff_unserved_wh = du;
      r->diff_microgrid_self_sufficiency = ds;
    }
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out =
      "seed,mode,status,self_sufficiency,microgrid_self_sufficiency,unserved_wh,blocking_rate,imports_wh,"
      "link_losses_wh,fairness,network_cost_proxy,diff_unserved_wh,diff_microgrid_self_sufficiency,error\n";
  for (const auto& r : result.rows) {
    out += std::to_string(r.seed) + "," + std::string(to_string(r.mode)) + ",";
    if (!r.ok) {
      std::string msg = r.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out += "failed,,,,,,,,,,," + msg + "\n";
      continue;
    }
    out += "ok," + format_ratio(r.self_sufficiency) + "," + format_ratio(r.microgrid_self_sufficiency) + "," +
           std::to_string(r.unserved_wh) + "," + format_ratio(r.blocking_rate) + "," + std::to_string(r.imports_wh) +
           "," + std::to_string(r.link_losses_wh) + "," + format_ratio(r.fairness) + "," +
           format_ratio(r.network_cost_proxy) + "," +
           (r.diff_unserved_wh ? std::to_string(*r.diff_unserved_wh) : std::string()) + "," +
           (r.diff_microgrid_self_sufficiency ? format_ratio(*r.diff_microgrid_self_sufficiency) : std::string()) +
           ",\n";
  }
  return out;
}

std::string sweep_summary(const SweepResult& result) {
  struct Acc {
    std::size_t n = 0;
    double unserved = 0;
    double ss = 0;
    double blocking = 0;
  };
  std::map<Mode, Acc> per_mode;
  std::size_t pairs = 0;
  std::size_t commons_not_worse = 0;
  double diff_unserved = 0;
  double diff_ss = 0;
  for (const auto& r : result.rows) {
    if (!r.ok) continue;
    auto& a = per_mode[r.mode];
    ++a.n;
    a.unserved += static_cast<double>(r.unserved_wh);
    a.ss += r.microgrid_self_sufficiency;
    a.blocking += r.blocking_rate;
    if (r.mode == Mode::Commons && r.diff_unserved_wh) {
      ++pairs;
      if (*r.diff_unserved_wh <= 0) ++commons_not_worse;
      diff_unserved += static_cast<double>(*r.diff_unserved_wh);
      diff_ss += *r.diff_microgrid_self_sufficiency;
    }
  }
  std::string out;
  out += "runs: " + std::to_string(result.rows.size()) + " failed: " + std::to_string(result.failures()) + "\n";
  for (const auto& [mode, a] : per_mode) {
    const double n = static_cast<double>(a.n);
    out += std::string(to_string(mode)) + ": mean_unserved_wh=" + format_ratio(a.unserved / n) +
           " mean_microgrid_self_sufficiency=" + format_ratio(a.ss / n) +
           " mean_blocking_rate=" + format_ratio(a.blocking / n) + "\n";
  }
  if (pairs > 0) {
    const double n = static_cast<double>(pairs);
    out += "paired (commons - uncoordinated) over " + std::to_string(pairs) +
           " seeds: mean_diff_unserved_wh=" + format_ratio(diff_unserved / n) +
           " mean_diff_microgrid_self_sufficiency=" + format_ratio(diff_ss / n) +
           " commons_not_worse=" + std::to_string(commons_not_worse) + "/" + std::to_string(pairs) + "\n";
  }
  return out;
}

}  // namespace packetgrid
