// Copyright 2026 The iss-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scenario runner and trace verifier.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "iss/checker.hpp"
#include "iss/metrics.hpp"
#include "iss/scenario.hpp"

namespace fs = std::filesystem;
using namespace iss;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

ScenarioConfig load(const std::string& path, const std::vector<std::string>& overrides) {
  FlatConfig flat = load_config_file(path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError(kv + ": expected key=value");
    flat.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return build_config(flat);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

nlohmann::json summary(const RunResult& run, const check::Report& report,
                       const metrics::Report& m) {
  nlohmann::json j;
  j["final_epoch"] = run.stats.min_completed_epochs;
  j["total_delivered"] = m.delivered;
  j["submitted"] = run.stats.submitted;
  j["end_time_s"] = to_seconds(run.stats.end_time);
  j["completed"] = run.stats.completed;
  j["liveness_evaluable"] = run.stats.liveness_evaluable;
  j["throughput_rps"] = m.throughput;
  j["mean_latency_ms"] = m.mean_latency_ms;
  j["p95_latency_ms"] = m.p95_latency_ms;
  j["messages"] = run.stats.messages;
  j["events"] = run.stats.events;
  if (run.stats.violation) j["violation"] = *run.stats.violation;
  auto& v = j["verdicts"];
  for (const auto& r : report.results) {
    v[r.name] = std::string(check::to_string(r.verdict));
    if (!r.detail.empty()) j["details"][r.name] = r.detail;
  }
  return j;
}

int cmd_run(const std::string& config_path, std::uint64_t seed, const std::string& out_dir,
            const std::vector<std::string>& overrides, bool sb_only) {
  const auto config = load(config_path, overrides);
  const auto run = sb_only ? run_sb(config, seed) : run_scenario(config, seed);
  const auto report = check::verify(run.trace);
  const auto m = metrics::compute(run.trace);

  fs::create_directories(out_dir);
  trace::write_file((fs::path(out_dir) / "trace.bin").string(), run.trace);
  write_text(fs::path(out_dir) / "metrics.csv", metrics::to_csv(m));
  write_text(fs::path(out_dir) / "summary.json", summary(run, report, m).dump(2) + "\n");

  std::cout << fmt::format("end {:.3f}s  epochs {}  delivered {}/{}  throughput {:.1f} req/s  "
                           "mean latency {:.1f} ms\n",
                           to_seconds(run.stats.end_time), run.stats.min_completed_epochs,
                           m.delivered, run.stats.submitted, m.throughput, m.mean_latency_ms);
  if (run.stats.violation) std::cout << "invariant violation: " << *run.stats.violation << "\n";
  std::cout << check::format(report);
  return report.ok() && !run.stats.violation ? 0 : kExitFail;
}

int cmd_verify(const std::string& path) {
  bool truncated = false;
  const auto trace = trace::read_file(path, &truncated);
  if (truncated) std::cout << "trace is truncated; reading the complete prefix\n";
  const auto report = check::verify(trace);
  std::cout << check::format(report);
  return report.ok() ? 0 : kExitFail;
}

std::vector<std::string> expand_range(const std::string& range) {
  std::vector<std::string> out;
  if (const auto dots = range.find(".."); dots != std::string::npos) {
    const auto lo = std::stoll(range.substr(0, dots));
    const auto hi = std::stoll(range.substr(dots + 2));
    for (auto v = lo; v <= hi; ++v) out.push_back(std::to_string(v));
  } else {
    std::stringstream ss(range);
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) out.push_back(item);
    }
  }
  return out;
}

int cmd_sweep(const std::string& config_path, const std::string& param, std::uint64_t seeds,
              std::uint64_t first_seed, const std::string& out_path,
              const std::vector<std::string>& overrides) {
  const auto eq = param.find('=');
  if (eq == std::string::npos) throw ConfigError("--param: expected key=range");
  const auto key = param.substr(0, eq);
  const auto values = expand_range(param.substr(eq + 1));
  if (values.empty()) throw ConfigError(key + ": empty range");
  if (seeds == 0) throw ConfigError("--seeds: must be at least 1");

  std::string csv =
      "param,value,seed,delivered,submitted,throughput_rps,mean_latency_ms,p95_latency_ms,"
      "epochs,verdict\n";
  bool all_ok = true;
  for (const auto& value : values) {
    auto ov = overrides;
    ov.push_back(key + "=" + value);
    const auto config = load(config_path, ov);
    for (std::uint64_t s = first_seed; s < first_seed + seeds; ++s) {
      const auto run = run_scenario(config, s);
      const auto report = check::verify(run.trace);
      const auto m = metrics::compute(run.trace);
      const bool ok = report.ok() && !run.stats.violation;
      all_ok = all_ok && ok;
      csv += fmt::format("{},{},{},{},{},{:.3f},{:.3f},{:.3f},{},{}\n", key, value, s, m.delivered,
                         run.stats.submitted, m.throughput, m.mean_latency_ms, m.p95_latency_ms,
                         run.stats.min_completed_epochs, ok ? "PASS" : "FAIL");
      std::cout << fmt::format("{}={} seed {}: {:.1f} req/s, {}\n", key, value, s, m.throughput,
                               ok ? "PASS" : "FAIL");
    }
  }
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text(out_path, csv);
  }
  return all_ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ISS simulator: run scenarios, verify traces, sweep parameters"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", trace_path, param, sweep_out;
  std::uint64_t seed = 1, seeds = 1;
  std::vector<std::string> overrides;
  bool sb_only = false;

  auto* run = app.add_subcommand("run", "Run one scenario and check the trace");
  run->add_option("--config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Run seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--set", overrides, "Override a configuration key (key=value)");
  run->add_flag("--sb-only", sb_only, "Run a single SB instance instead of the full system");

  auto* verify = app.add_subcommand("verify", "Check the properties of a recorded trace");
  verify->add_option("--trace", trace_path, "Trace file")->required()->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "Run a grid of scenarios and aggregate metrics");
  sweep->add_option("--config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "key=lo..hi or key=a,b,c")->required();
  sweep->add_option("--seeds", seeds, "Seeds per value");
  sweep->add_option("--seed", seed, "First seed");
  sweep->add_option("--out", sweep_out, "CSV output file (stdout if omitted)");
  sweep->add_option("--set", overrides, "Override a configuration key (key=value)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, seed, out_dir, overrides, sb_only);
    if (*verify) return cmd_verify(trace_path);
    if (*sweep) return cmd_sweep(config_path, param, seeds, seed, sweep_out, overrides);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
