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

#include <random>

#include "helpers.hpp"
#include "iss/policies.hpp"

using namespace iss;
using namespace iss::testing;

namespace {

NodeConfig policy_config(PolicyKind kind, std::size_t n = 4, std::size_t f = 1) {
  NodeConfig c;
  c.n = n;
  c.f = f;
  c.policy = kind;
  c.epoch_length = 2 * n;
  c.ban_period = 8;
  c.backoff_decrease = 1;
  return c;
}

/// Runs epochs through a policy; every slot led by a node in `failing(e)` is nil.
struct History {
  explicit History(const NodeConfig& c) : config(c), layout(c.epoch_length), policy(c) {}

  template <typename Failing>
  std::vector<NodeId> run_epoch(Failing failing) {
    const EpochNr e = layout.known_epochs();
    const auto leaders = policy.leaders();
    layout.add_epoch(leaders);
    const auto range = layout.seq_nrs(e);
    for (SeqNr sn = range.first; sn < range.end(); ++sn) {
      const NodeId l = policy::leader_of(sn, layout);
      log.commit(sn, failing(e, l) ? Batch::nil() : make_batch({{l, sn}}));
    }
    policy.epoch_committed(e, layout, log);
    return leaders;
  }
  std::vector<NodeId> clean_epoch() {
    return run_epoch([](EpochNr, NodeId) { return false; });
  }
  std::vector<NodeId> failing_epoch(NodeId node) {
    return run_epoch([node](EpochNr, NodeId l) { return l == node; });
  }

  NodeConfig config;
  EpochLayout layout;
  Log log;
  policy::LeaderPolicy policy;
};

const std::vector<NodeId> kAll{0, 1, 2, 3};

}  // namespace

TEST_CASE("last failure") {
  History h(policy_config(PolicyKind::Simple));
  h.clean_epoch();
  CHECK(policy::last_failure(1, 1, h.layout, h.log) == -1);
  h.failing_epoch(1);  // epoch 1 covers sns 8..15; node 1 leads 9 and 13
  CHECK(policy::last_failure(1, 2, h.layout, h.log) == 13);
  CHECK(policy::last_failure(1, 1, h.layout, h.log) == -1);
  h.clean_epoch();
  h.clean_epoch();
  CHECK(policy::last_failure(1, 4, h.layout, h.log) == 13);  // failures persist
  CHECK(h.policy.last_failure(1) == 13);
  CHECK(policy::last_failure(0, 4, h.layout, h.log) == -1);
}

TEST_CASE("blacklist selection") {
  CHECK(policy::blacklist({-1, -1, -1, -1}, 1).empty());
  CHECK(policy::blacklist({-1, 3, -1, 7}, 1) == std::vector<NodeId>{3});
  CHECK(policy::blacklist({-1, 3, -1, 7}, 2) == std::vector<NodeId>{1, 3});
  CHECK(policy::blacklist({5, -1, 5, -1}, 1) == std::vector<NodeId>{2});  // tie toward higher id
  CHECK(policy::blacklist({9, 8, 7, 6, 5, 4, 3}, 2) == std::vector<NodeId>{0, 1});
}

TEST_CASE("SIMPLE keeps every node") {
  History h(policy_config(PolicyKind::Simple));
  CHECK(h.failing_epoch(2) == kAll);
  for (int i = 0; i < 5; ++i) CHECK(h.failing_epoch(2) == kAll);
}

TEST_CASE("BLACKLIST removes a failed leader for good") {
  History h(policy_config(PolicyKind::Blacklist));
  CHECK(h.clean_epoch() == kAll);
  CHECK(h.failing_epoch(2) == kAll);
  for (int i = 0; i < 12; ++i) CHECK(h.clean_epoch() == std::vector<NodeId>{0, 1, 3});
}

TEST_CASE("BLACKLIST swaps in the most recent offender") {
  History h(policy_config(PolicyKind::Blacklist));
  h.failing_epoch(2);
  h.failing_epoch(1);  // node 1 now has the higher last failure
  CHECK(h.clean_epoch() == std::vector<NodeId>{0, 2, 3});
}

TEST_CASE("BACKOFF doubles and decays the penalty") {
  History h(policy_config(PolicyKind::Backoff));
  h.failing_epoch(3);
  CHECK(h.policy.penalty(3) == 8);
  for (int i = 0; i < 4; ++i) h.clean_epoch();
  CHECK(h.policy.penalty(3) == 4);
  // Node 3 is banned, so an offence has to be injected into its history.
  History g(policy_config(PolicyKind::Backoff));
  g.failing_epoch(3);
  for (int i = 0; i < 4; ++i) g.clean_epoch();
  g.layout.add_epoch(kAll);
  const auto range = g.layout.seq_nrs(5);
  for (SeqNr sn = range.first; sn < range.end(); ++sn) {
    g.log.commit(sn, sn % 4 == 3 ? Batch::nil() : Batch::of({}));
  }
  g.policy.epoch_committed(5, g.layout, g.log);
  CHECK(g.policy.penalty(3) == 7);

  for (int i = 0; i < 4; ++i) CHECK(h.clean_epoch() == std::vector<NodeId>{0, 1, 2});
  CHECK(h.policy.penalty(3) == 0);
  CHECK(h.clean_epoch() == kAll);
}

TEST_CASE("policy folds are out-of-order safe") {
  History h(policy_config(PolicyKind::Simple));
  h.clean_epoch();
  CHECK_THROWS_AS(h.policy.epoch_committed(0, h.layout, h.log), InvariantViolation);
}

TEST_CASE("leadersets are deterministic and BLACKLIST keeps n - f leaders") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 4 + rng() % 6;
    const std::size_t f = (n - 1) / 3;
    for (auto kind : {PolicyKind::Simple, PolicyKind::Backoff, PolicyKind::Blacklist}) {
      const auto c = policy_config(kind, n, f);
      History a(c), b(c);
      std::vector<std::vector<bool>> fails(30, std::vector<bool>(n));
      for (auto& e : fails) {
        for (std::size_t i = 0; i < n; ++i) e[i] = rng() % 5 == 0;
      }
      auto failing = [&](EpochNr e, NodeId l) { return static_cast<bool>(fails[e][l]); };
      for (EpochNr e = 0; e < fails.size(); ++e) {
        const auto la = a.run_epoch(failing);
        CHECK(la == b.run_epoch(failing));
        if (kind == PolicyKind::Blacklist) CHECK(la.size() >= n - f);
        if (kind == PolicyKind::Simple) CHECK(la.size() == n);
      }
    }
  }
}
