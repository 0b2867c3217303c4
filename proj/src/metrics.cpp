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

#include "iss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

namespace iss::metrics {

double percentile(std::vector<double> samples, double p) {
  if (samples.empty()) return 0;
  std::sort(samples.begin(), samples.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(samples.size())));
  return samples[std::clamp<std::size_t>(rank, 1, samples.size()) - 1];
}

namespace {

double mean(const std::vector<double>& v) {
  return v.empty() ? 0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

Report compute(const trace::Trace& trace, SimTime window) {
  Report r;
  std::map<RequestId, SimTime> cast_at;
  std::set<NodeId> faulty;
  std::map<EpochNr, SimTime> first_start, last_complete;
  std::vector<std::pair<SimTime, double>> completions;
  SimTime first_cast = -1;

  for (const auto& ev : trace) {
    if (const auto* info = std::get_if<trace::RunInfo>(&ev)) {
      faulty.insert(info->faulty.begin(), info->faulty.end());
    } else if (const auto* c = std::get_if<trace::ClientCast>(&ev)) {
      cast_at.emplace(c->id, c->t);
      if (first_cast < 0) first_cast = c->t;
    } else if (const auto* c = std::get_if<trace::ClientComplete>(&ev)) {
      auto it = cast_at.find(c->id);
      if (it == cast_at.end()) continue;
      completions.emplace_back(c->t, to_seconds(c->t - it->second) * 1e3);
    } else if (const auto* s = std::get_if<trace::EpochStart>(&ev)) {
      if (faulty.count(s->node)) continue;
      auto [it, fresh] = first_start.emplace(s->epoch, s->t);
      if (!fresh) it->second = std::min(it->second, s->t);
    } else if (const auto* s = std::get_if<trace::EpochComplete>(&ev)) {
      if (faulty.count(s->node)) continue;
      auto& t = last_complete[s->epoch];
      t = std::max(t, s->t);
    }
  }

  r.delivered = completions.size();
  for (const auto& [t, l] : completions) r.latencies_ms.push_back(l);
  r.mean_latency_ms = mean(r.latencies_ms);
  r.p95_latency_ms = percentile(r.latencies_ms, 95);
  if (!completions.empty()) {
    const SimTime span = completions.back().first - std::max<SimTime>(first_cast, 0);
    r.throughput = span > 0 ? static_cast<double>(completions.size()) / to_seconds(span) : 0;

    const auto last = static_cast<std::size_t>(completions.back().first / window);
    std::vector<std::vector<double>> buckets(last + 1);
    for (const auto& [t, l] : completions) buckets[static_cast<std::size_t>(t / window)].push_back(l);
    for (std::size_t i = 0; i < buckets.size(); ++i) {
      Window w;
      w.start_s = to_seconds(static_cast<SimTime>(i) * window);
      w.delivered = buckets[i].size();
      w.mean_latency_ms = mean(buckets[i]);
      w.p95_latency_ms = percentile(buckets[i], 95);
      r.windows.push_back(w);
    }
  }
  for (const auto& [e, done] : last_complete) {
    auto it = first_start.find(e);
    if (it != first_start.end()) r.epoch_durations_s[e] = to_seconds(done - it->second);
  }
  return r;
}

std::string to_csv(const Report& report) {
  std::string out = "window_start_s,delivered_reqs,mean_latency_ms,p95_latency_ms\n";
  for (const auto& w : report.windows) {
    out += fmt::format("{:.3f},{},{:.3f},{:.3f}\n", w.start_s, w.delivered, w.mean_latency_ms,
                       w.p95_latency_ms);
  }
  return out;
}

}  // namespace iss::metrics
