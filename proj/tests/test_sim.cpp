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
#include "iss/checker.hpp"
#include "iss/scenario.hpp"
#include "iss/sim.hpp"

using namespace iss;

namespace {

struct Probe : sim::Process {
  sim::Simulator* sim = nullptr;
  std::vector<std::pair<SimTime, ProcessId>> got;
  void receive(ProcessId from, const Payload&) override { got.emplace_back(sim->now(), from); }
};

}  // namespace

TEST_CASE("events run in time order, ties in insertion order") {
  sim::Simulator s;
  std::vector<int> order;
  s.schedule(10, sim::kNoOwner, [&] { order.push_back(2); });
  s.schedule(5, sim::kNoOwner, [&] { order.push_back(1); });
  s.schedule(10, sim::kNoOwner, [&] { order.push_back(3); });
  const auto dropped = s.schedule(7, sim::kNoOwner, [&] { order.push_back(99); });
  s.cancel(dropped);
  s.run_until(100);
  CHECK(order == std::vector<int>{1, 2, 3});
  CHECK(s.now() == 10);
  CHECK(s.idle());
}

TEST_CASE("horizon and stop predicate end a run") {
  sim::Simulator s;
  int fired = 0;
  for (int i = 1; i <= 10; ++i) s.schedule(i * 10, sim::kNoOwner, [&] { ++fired; });
  s.run_until(35);
  CHECK(fired == 3);
  s.run_until(1000, [&] { return fired == 5; });
  CHECK(fired == 5);
}

TEST_CASE("a crashed process loses its pending events") {
  sim::Simulator s;
  int fired = 0;
  s.schedule(10, 1, [&] { ++fired; });
  s.schedule(5, sim::kNoOwner, [&] { s.crash(1); });
  s.run_until(100);
  CHECK(fired == 0);
  CHECK(s.crashed(1));
}

TEST_CASE("post-GST delays stay within the jitter band") {
  sim::Simulator s;
  sim::NetworkParams p;
  p.mean_delay = 100;
  p.jitter = 0.2;
  p.nodes = 2;
  sim::Network net(s, p, 1);
  Probe a, b;
  a.sim = b.sim = &s;
  net.attach(0, &a);
  net.attach(1, &b);
  for (int i = 0; i < 200; ++i) net.send(0, 1, HeartbeatMsg{});
  s.run_until(1000);
  REQUIRE(b.got.size() == 200);
  for (const auto& [t, from] : b.got) {
    CHECK(t >= 80);
    CHECK(t <= p.delta());
  }
}

TEST_CASE("pre-GST delays are bounded by the factor and never dropped") {
  sim::Simulator s;
  sim::NetworkParams p;
  p.mean_delay = 100;
  p.gst = 1000;
  p.pre_gst_factor = 10;
  p.nodes = 2;
  sim::Network net(s, p, 2);
  Probe a, b;
  a.sim = b.sim = &s;
  net.attach(0, &a);
  net.attach(1, &b);
  for (int i = 0; i < 200; ++i) net.send(0, 1, HeartbeatMsg{});
  s.run_until(100000);
  CHECK(b.got.size() == 200);
  for (const auto& [t, from] : b.got) CHECK(t <= 1000);
}

TEST_CASE("partitions drop traffic across the cut while active") {
  sim::Simulator s;
  sim::NetworkParams p;
  p.mean_delay = 10;
  p.jitter = 0;
  p.nodes = 3;
  sim::Network net(s, p, 3);
  Probe a, b, c;
  a.sim = b.sim = c.sim = &s;
  net.attach(0, &a);
  net.attach(1, &b);
  net.attach(2, &c);
  net.add_partition({{2}, 100, 200});
  s.schedule(150, sim::kNoOwner, [&] {
    net.send(0, 2, HeartbeatMsg{});
    net.send(0, 1, HeartbeatMsg{});
  });
  s.schedule(95, sim::kNoOwner, [&] { net.send(2, 0, HeartbeatMsg{}); });  // lands inside the window
  s.schedule(250, sim::kNoOwner, [&] { net.send(0, 2, HeartbeatMsg{}); });
  s.run_until(1000);
  CHECK(a.got.empty());
  CHECK(b.got.size() == 1);
  REQUIRE(c.got.size() == 1);
  CHECK(c.got[0].first == 260);
}

TEST_CASE("egress bandwidth serializes a sender's messages") {
  sim::Simulator s;
  sim::NetworkParams p;
  p.mean_delay = 10;
  p.jitter = 0;
  p.nodes = 2;
  const auto size = wire_size(Payload{HeartbeatMsg{}});
  p.egress_bytes_per_sec = static_cast<double>(size) * 1e6;  // one message per microsecond
  sim::Network net(s, p, 4);
  Probe a, b;
  a.sim = b.sim = &s;
  net.attach(0, &a);
  net.attach(1, &b);
  for (int i = 0; i < 3; ++i) net.send(0, 1, HeartbeatMsg{});
  s.run_until(kSecond);
  REQUIRE(b.got.size() == 3);
  CHECK(b.got[0].first == 10 + kMicrosecond);
  CHECK(b.got[2].first == 10 + 3 * kMicrosecond);
}

TEST_CASE("a run is a pure function of config and seed") {
  const auto c = iss::testing::small_scenario(4, 1, OrdererKind::Pbft);
  const auto a = run_scenario(c, 5);
  const auto b = run_scenario(c, 5);
  CHECK(trace::serialize(a.trace) == trace::serialize(b.trace));
  const auto other = run_scenario(c, 6);
  CHECK(trace::serialize(other.trace) != trace::serialize(a.trace));
  CHECK(check::verify(a.trace).ok());
  CHECK(check::verify(other.trace).ok());
}

TEST_CASE("a horizon before stabilization leaves liveness unevaluated") {
  auto c = iss::testing::small_scenario(4, 1, OrdererKind::Pbft);
  c.network.gst = 5 * kSecond;
  c.horizon = 3 * kSecond;
  const auto run = run_scenario(c, 1);
  CHECK_FALSE(run.stats.liveness_evaluable);
  const auto report = check::verify(run.trace);
  CHECK(report.verdict("SMR4") == check::Verdict::NotEvaluable);
  CHECK(report.verdict("SB3") == check::Verdict::NotEvaluable);
  CHECK(report.verdict("SMR2") == check::Verdict::Pass);
  CHECK(report.ok());
}

TEST_CASE("compact traces keep one node's deliveries") {
  auto c = iss::testing::small_scenario(4, 1, OrdererKind::Pbft);
  c.trace_detail = TraceDetail::Compact;
  const auto run = run_scenario(c, 1);
  for (const auto* d : iss::testing::events_of<trace::SmrDeliver>(run.trace)) CHECK(d->node == 0);
  const auto report = check::verify(run.trace);
  CHECK(report.verdict("SMR2") == check::Verdict::NotEvaluable);
  CHECK(report.verdict("SMR4") == check::Verdict::Pass);
}
