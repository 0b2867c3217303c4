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

#include <map>
#include <string>
#include <vector>

#include "iss/trace.hpp"

namespace iss::metrics {

struct Window {
  double start_s = 0;
  std::uint64_t delivered = 0;
  double mean_latency_ms = 0;
  double p95_latency_ms = 0;
};

/// Throughput counts requests completed at their client (f+1 matching
/// responses); latency runs from submission to completion.
struct Report {
  std::vector<Window> windows;
  std::uint64_t delivered = 0;
  std::vector<double> latencies_ms;  // in completion order
  double mean_latency_ms = 0;
  double p95_latency_ms = 0;
  double throughput = 0;  // completed requests per second over the active period
  /// Per epoch: first start to last completion among correct nodes.
  std::map<EpochNr, double> epoch_durations_s;
};

/// Nearest-rank percentile (p in (0, 100]) of unsorted samples; 0 if empty.
double percentile(std::vector<double> samples, double p);

Report compute(const trace::Trace& trace, SimTime window = kSecond);

/// CSV with header window_start_s,delivered_reqs,mean_latency_ms,p95_latency_ms.
std::string to_csv(const Report& report);

}  // namespace iss::metrics
