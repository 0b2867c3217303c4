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

#include <set>

#include "helpers.hpp"
#include "iss/checker.hpp"
#include "iss/checkpoint.hpp"
#include "iss/crypto.hpp"
#include "iss/merkle.hpp"
#include "iss/scenario.hpp"

using namespace iss;
using namespace iss::testing;

namespace {

void require_clean(const RunResult& run) {
  REQUIRE_FALSE(run.stats.violation);
  const auto report = check::verify(run.trace);
  INFO(check::format(report));
  CHECK(report.ok());
}

FaultSpec crash_at_epoch(NodeId node, EpochNr e, TriggerType trigger) {
  FaultSpec f;
  f.type = FaultType::Crash;
  f.node = node;
  f.trigger = trigger;
  f.epoch = e;
  return f;
}

}  // namespace

TEST_CASE("fault-free run delivers and completes every request") {
  for (auto orderer : {OrdererKind::Pbft, OrdererKind::Reference}) {
    CAPTURE(to_string(orderer));
    const auto run = run_scenario(small_scenario(4, 1, orderer), 1);
    require_clean(run);
    CHECK(run.stats.completed);
    CHECK(run.stats.submitted == 60);
    CHECK(run.stats.client_completed == run.stats.submitted);
    const auto report = check::verify(run.trace);
    for (const char* p : {"SMR1", "SMR2", "SMR3", "SMR4", "no-duplication", "log-equality"}) {
      CHECK(report.verdict(p) == check::Verdict::Pass);
    }
    for (const auto* d : events_of<trace::SbDeliver>(run.trace)) CHECK_FALSE(d->nil);
  }
}

TEST_CASE("reference orderer with PBFT agreement") {
  auto c = small_scenario(4, 1, OrdererKind::Reference);
  c.node.consensus = ConsensusKind::Pbft;
  const auto run = run_scenario(c, 2);
  require_clean(run);
  CHECK(run.stats.completed);
}

TEST_CASE("Raft deployment tolerates a crashed node") {
  auto c = small_scenario(5, 2, OrdererKind::Raft);
  c.faults.push_back(crash_at(1, 500 * kMillisecond));
  const auto run = run_scenario(c, 3);
  require_clean(run);
  CHECK(run.stats.completed);
  CHECK(run.stats.client_completed == run.stats.submitted);
}

TEST_CASE("runs are deterministic in config and seed") {
  auto c = small_scenario(4, 1, OrdererKind::Pbft);
  c.faults.push_back(crash_at(2, 700 * kMillisecond));
  const auto a = run_scenario(c, 9);
  const auto b = run_scenario(c, 9);
  const auto other = run_scenario(c, 10);
  CHECK(trace::serialize(a.trace) == trace::serialize(b.trace));
  CHECK(trace::serialize(a.trace) != trace::serialize(other.trace));
}

TEST_CASE("epoch-start crash yields nil segment and BLACKLIST drops the node") {
  auto c = small_scenario(4, 1, OrdererKind::Pbft);
  c.node.max_epochs = 6;
  c.clients.duration = 30 * kSecond;
  c.faults.push_back(crash_at_epoch(2, 1, TriggerType::EpochStart));
  const auto run = run_scenario(c, 4);
  require_clean(run);
  CHECK(run.stats.min_completed_epochs >= 6);
  std::map<EpochNr, std::vector<NodeId>> leaders;
  for (const auto* s : events_of<trace::EpochStart>(run.trace)) {
    if (s->node == 0) leaders[s->epoch] = s->leaders;
  }
  REQUIRE(leaders.count(1));
  CHECK(leaders[1] == std::vector<NodeId>{0, 1, 2, 3});
  std::size_t nil_in_epoch1 = 0;
  for (const auto* d : events_of<trace::SbDeliver>(run.trace)) {
    if (d->node == 0 && d->key == InstanceKey{1, 2}) {
      CHECK(d->nil);
      ++nil_in_epoch1;
    }
  }
  CHECK(nil_in_epoch1 > 0);
  for (EpochNr e = 2; e < 6; ++e) {
    REQUIRE(leaders.count(e));
    CHECK(leaders[e] == std::vector<NodeId>{0, 1, 3});
  }
}

TEST_CASE("an epoch limit stops the run") {
  auto c = small_scenario(4, 1, OrdererKind::Pbft);
  c.node.max_epochs = 3;
  c.clients.duration = 30 * kSecond;
  const auto run = run_scenario(c, 5);
  require_clean(run);
  CHECK(run.stats.completed);
  CHECK(run.stats.min_completed_epochs == 3);
  CHECK(check::verify(run.trace).verdict("SMR4") == check::Verdict::NotEvaluable);
}

TEST_CASE("an equivocating leader does not break agreement") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (auto orderer : {OrdererKind::Pbft, OrdererKind::Reference}) {
      auto c = small_scenario(4, 1, orderer);
      c.faults.push_back(equivocator(1));
      const auto run = run_scenario(c, seed);
      require_clean(run);
      CHECK(run.stats.completed);
    }
  }
}

TEST_CASE("a node signing wrong checkpoints cannot block stability") {
  auto c = small_scenario(4, 1, OrdererKind::Pbft);
  FaultSpec f;
  f.type = FaultType::WrongCheckpoint;
  f.node = 3;
  c.faults.push_back(f);
  const auto run = run_scenario(c, 6);
  require_clean(run);
  const auto stable = events_of<trace::CheckpointStable>(run.trace);
  REQUIRE_FALSE(stable.empty());
  std::map<EpochNr, std::set<Digest>> roots;
  for (const auto* s : stable) {
    CHECK(s->signers >= 3);
    if (s->node != 3) roots[s->epoch].insert(s->root);
  }
  for (const auto& [e, r] : roots) CHECK(r.size() == 1);
}

TEST_CASE("a partitioned node catches up through state transfer") {
  auto c = small_scenario(4, 1, OrdererKind::Pbft);
  c.node.policy = PolicyKind::Simple;
  c.node.epoch_length = 8;
  c.clients.count = 4;
  c.clients.rate = 20;
  c.clients.duration = 10 * kSecond;
  FaultSpec p;
  p.type = FaultType::Partition;
  p.node = 3;
  p.at = 2 * kSecond;
  p.until = 6 * kSecond;
  c.faults.push_back(p);
  const auto run = run_scenario(c, 1);
  require_clean(run);
  CHECK(run.stats.completed);
  bool transferred = false;
  for (const auto* s : events_of<trace::StateTransfer>(run.trace)) {
    if (s->node == 3 && s->accepted) transferred = true;
  }
  CHECK(transferred);
  CHECK_FALSE(events_of<trace::TransferInstall>(run.trace).empty());
  const auto logs = events_of<trace::FinalLog>(run.trace);
  REQUIRE(logs.size() == 4);
  for (const auto* l : logs) {
    CHECK(l->log_digest == logs[0]->log_digest);
    CHECK(l->epoch_roots == logs[0]->epoch_roots);
  }
}

TEST_CASE("a straggler slows but does not lose requests") {
  auto c = small_scenario(4, 1, OrdererKind::Pbft);
  FaultSpec f;
  f.type = FaultType::Straggler;
  f.node = 1;
  c.faults.push_back(f);
  const auto run = run_scenario(c, 7);
  require_clean(run);
  CHECK(run.stats.completed);
  CHECK(run.stats.client_completed == run.stats.submitted);
}

namespace {

EpochTransfer signed_transfer(const crypto::SignatureScheme& sigs, std::vector<NodeId> signers) {
  EpochTransfer t;
  t.epoch = 2;
  t.entries = {make_batch({{0, 4}, {1, 2}}), Batch::nil(), Batch::of({}), make_batch({{3, 3}})};
  t.checkpoint.epoch = 2;
  t.checkpoint.max_sn = 11;
  t.checkpoint.root = merkle::root_of(t.entries);
  const auto d = checkpoint_digest(2, 11, t.checkpoint.root);
  for (NodeId s : signers) t.checkpoint.signatures.push_back({s, sigs.sign(s, d)});
  return t;
}

}  // namespace

TEST_CASE("transfer verification") {
  NodeConfig config;
  const auto sigs = crypto::make_mac_scheme(5, 4);
  const SnRange range{8, 4};
  CHECK(checkpoint::verify_transfer(signed_transfer(*sigs, {0, 1, 3}), range, config, *sigs));
  CHECK_FALSE(checkpoint::verify_transfer(signed_transfer(*sigs, {0, 1}), range, config, *sigs));
  CHECK_FALSE(checkpoint::verify_transfer(signed_transfer(*sigs, {0, 1, 1}), range, config, *sigs));
  CHECK_FALSE(checkpoint::verify_transfer(signed_transfer(*sigs, {0, 1, 3}), {8, 5}, config, *sigs));

  SUBCASE("a payload changed under its old digest is caught") {
    auto t = signed_transfer(*sigs, {0, 1, 2});
    auto forged = *t.entries[0].requests()[1];
    forged.payload = {0xee};
    auto reqs = t.entries[0].requests();
    reqs[1] = std::make_shared<const Request>(forged);
    t.entries[0] = Batch::of(reqs);
    CHECK(merkle::root_of(t.entries) == t.checkpoint.root);  // carried digests still match
    CHECK_FALSE(checkpoint::verify_transfer(t, range, config, *sigs));
  }
  SUBCASE("a replaced entry is caught") {
    auto t = signed_transfer(*sigs, {0, 1, 2});
    t.entries[1] = Batch::of({});
    CHECK_FALSE(checkpoint::verify_transfer(t, range, config, *sigs));
  }
  SUBCASE("a forged signature is caught") {
    auto t = signed_transfer(*sigs, {0, 1, 2});
    t.checkpoint.signatures[2].sig[0] ^= 1;
    CHECK_FALSE(checkpoint::verify_transfer(t, range, config, *sigs));
  }
}
