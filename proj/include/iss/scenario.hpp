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

#pragma once

#include <optional>
#include <string>

#include "iss/config.hpp"
#include "iss/trace.hpp"

namespace iss {

struct RunStats {
  SimTime end_time = 0;
  bool completed = false;  // stop condition reached before the horizon
  bool liveness_evaluable = false;
  std::uint64_t events = 0;
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
  std::uint64_t submitted = 0;
  std::uint64_t client_completed = 0;
  EpochNr min_completed_epochs = 0;  // over correct nodes
  std::optional<std::string> violation;  // invariant violation that aborted the run
};

struct RunResult {
  trace::Trace trace;
  RunStats stats;
};

/// Runs a full ISS deployment with clients and scripted faults until the
/// workload is delivered everywhere (or the epoch limit is reached), or
/// until the horizon. Deterministic in (config, seed).
RunResult run_scenario(const ScenarioConfig& config, std::uint64_t seed);

/// Runs a single SB instance (epoch 0, sender node 0, `epochLength`
/// sequence numbers) with the configured orderer and faults. The sender
/// casts one batch every maxBatchTimeout.
RunResult run_sb(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace iss
