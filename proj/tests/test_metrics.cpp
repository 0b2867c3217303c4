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

#include <doctest.h>

#include "helpers.hpp"
#include "iss/metrics.hpp"
#include "iss/scenario.hpp"

using namespace iss;
using namespace iss::testing;

namespace {

trace::ClientCast cast(SimTime t, std::uint64_t id) { return {t, RequestId{id, 0}, {}}; }
trace::ClientComplete done(SimTime t, std::uint64_t id) { return {t, RequestId{id, 0}}; }

}  // namespace

TEST_CASE("nearest-rank percentile") {
  CHECK(metrics::percentile({}, 95) == 0);
  CHECK(metrics::percentile({5}, 95) == 5);
  std::vector<double> v;
  for (int i = 100; i >= 1; --i) v.push_back(i);
  CHECK(metrics::percentile(v, 95) == 95);
  CHECK(metrics::percentile(v, 100) == 100);
  CHECK(metrics::percentile({1, 2, 3, 4}, 50) == 2);
  CHECK(metrics::percentile({1, 2, 3, 4}, 51) == 3);
}

TEST_CASE("latency runs from submission to completion") {
  const trace::Trace t{cast(0, 0), done(1100 * kMillisecond, 0)};
  const auto m = metrics::compute(t);
  REQUIRE(m.latencies_ms.size() == 1);
  CHECK(m.latencies_ms[0] == doctest::Approx(1100));
  CHECK(m.mean_latency_ms == doctest::Approx(1100));
}

TEST_CASE("completions are counted in one-second windows") {
  trace::Trace t;
  // Three requests complete in window 0, none in window 1, two in window 2.
  const SimTime at[] = {100, 400, 900, 2100, 2500};
  for (std::uint64_t i = 0; i < 5; ++i) {
    t.push_back(cast(0, i));
    t.push_back(done(at[i] * kMillisecond, i));
  }
  const auto m = metrics::compute(t);
  REQUIRE(m.windows.size() == 3);
  CHECK(m.windows[0].delivered == 3);
  CHECK(m.windows[0].mean_latency_ms == doctest::Approx(1400.0 / 3));
  CHECK(m.windows[0].p95_latency_ms == doctest::Approx(900));
  CHECK(m.windows[1].delivered == 0);
  CHECK(m.windows[2].delivered == 2);
  CHECK(m.windows[2].start_s == doctest::Approx(2.0));
  CHECK(m.delivered == 5);
  CHECK(m.throughput == doctest::Approx(5 / 2.5));
  CHECK(metrics::to_csv(m) ==
        "window_start_s,delivered_reqs,mean_latency_ms,p95_latency_ms\n"
        "0.000,3,466.667,900.000\n"
        "1.000,0,0.000,0.000\n"
        "2.000,2,2300.000,2500.000\n");
}

TEST_CASE("an empty trace gives an empty report") {
  const auto m = metrics::compute({});
  CHECK(m.delivered == 0);
  CHECK(m.windows.empty());
  CHECK(m.throughput == 0);
  CHECK(metrics::to_csv(m) == "window_start_s,delivered_reqs,mean_latency_ms,p95_latency_ms\n");
}

TEST_CASE("epoch duration spans first start to last completion among correct nodes") {
  trace::RunInfo info;
  info.n = 3;
  info.faulty = {2};
  const trace::Trace t{info,
                       trace::EpochStart{1 * kSecond, 0, 0, 0, 0, {}, {}},
                       trace::EpochStart{1200 * kMillisecond, 1, 0, 0, 0, {}, {}},
                       trace::EpochStart{500 * kMillisecond, 2, 0, 0, 0, {}, {}},
                       trace::EpochComplete{2 * kSecond, 0, 0},
                       trace::EpochComplete{2500 * kMillisecond, 1, 0},
                       trace::EpochComplete{9 * kSecond, 2, 0}};
  const auto m = metrics::compute(t);
  REQUIRE(m.epoch_durations_s.count(0));
  CHECK(m.epoch_durations_s.at(0) == doctest::Approx(1.5));
}

TEST_CASE("a recorded run counts every completed request") {
  const auto run = run_scenario(small_scenario(4, 1, OrdererKind::Pbft), 1);
  const auto m = metrics::compute(run.trace);
  CHECK(m.delivered == run.stats.client_completed);
  CHECK(m.throughput > 0);
  CHECK(m.mean_latency_ms > 0);
  CHECK(m.p95_latency_ms >= m.mean_latency_ms * 0.5);
}
