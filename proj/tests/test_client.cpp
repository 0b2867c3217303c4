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

#include <algorithm>

#include "helpers.hpp"
#include "iss/buckets.hpp"
#include "iss/client.hpp"
#include "iss/crypto.hpp"
#include "iss/recorder.hpp"
#include "iss/sim.hpp"

using namespace iss;
using namespace iss::testing;

namespace {

struct StubNode : sim::Process {
  std::vector<RequestPtr> received;
  void receive(ProcessId, const Payload& msg) override {
    if (const auto* m = std::get_if<RequestMsg>(&msg)) received.push_back(m->request);
  }
};

/// One client (id 0) against n stub nodes; the client does not tick on its own.
struct Rig {
  explicit Rig(std::size_t n = 4, std::uint64_t window = 128) {
    scenario.node.n = n;
    scenario.node.f = (n - 1) / 3;
    scenario.node.watermark_window = window;
    scenario.clients.count = 1;
    scenario.clients.rate = 0;
    sigs = crypto::make_mac_scheme(3, n + 1);
    sim::NetworkParams np;
    np.nodes = n;
    net = std::make_unique<sim::Network>(sim, np, 1);
    nodes.resize(n);
    for (NodeId i = 0; i < n; ++i) net->attach(i, &nodes[i]);
    client = std::make_unique<Client>(0, scenario, sim, *net, *sigs, recorder);
    net->attach(client_process(scenario.node, 0), client.get());
    client->start();
  }

  void settle() { sim.run_until(sim.now() + kSecond); }

  void respond(NodeId node, const RequestId& id, std::uint64_t snr = 0, bool forge = false) {
    ResponseMsg m{node, {{id, snr}}, {}};
    m.sig = sigs->sign(forge ? (node + 1) % scenario.node.n : node, response_digest(node, m.entries));
    net->send(node, client_process(scenario.node, 0), m);
  }

  void announce(NodeId node, EpochNr e, std::vector<NodeId> leaders) {
    net->send(node, client_process(scenario.node, 0), AssignmentMsg{e, std::move(leaders)});
  }

  std::size_t copies(const RequestId& id) const {
    std::size_t k = 0;
    for (const auto& n : nodes) {
      for (const auto& r : n.received) k += r->id == id;
    }
    return k;
  }

  ScenarioConfig scenario;
  sim::Simulator sim;
  std::unique_ptr<crypto::SignatureScheme> sigs;
  std::unique_ptr<sim::Network> net;
  std::vector<StubNode> nodes;
  Recorder recorder;
  std::unique_ptr<Client> client;
};

}  // namespace

TEST_CASE("without an assignment a request goes to every node") {
  Rig rig;
  const auto id = rig.client->submit({1, 2, 3});
  rig.settle();
  CHECK(rig.copies(id) == 4);
  CHECK(events_of<trace::ClientCast>(rig.recorder.trace()).size() == 1);
}

TEST_CASE("same payload twice gives two distinct requests") {
  Rig rig;
  const auto a = rig.client->submit({7});
  const auto b = rig.client->submit({7});
  CHECK_FALSE(a == b);
  CHECK(a.t + 1 == b.t);
}

TEST_CASE("an assignment is adopted at f+1 matching announcements") {
  Rig rig(7);  // f = 2
  rig.announce(0, 1, {0, 1, 2, 3, 4, 5, 6});
  rig.announce(1, 1, {0, 1, 2, 3, 4, 5, 6});
  rig.announce(2, 1, {0, 1, 2});  // conflicting minority
  rig.settle();
  CHECK_FALSE(rig.client->adopted_epoch());
  rig.announce(3, 1, {0, 1, 2, 3, 4, 5, 6});
  rig.settle();
  REQUIRE(rig.client->adopted_epoch());
  CHECK(*rig.client->adopted_epoch() == 1);
}

TEST_CASE("under a known assignment a request goes to its next three bucket leaders") {
  Rig rig(7);
  for (NodeId i = 0; i < 3; ++i) rig.announce(i, 0, {0, 1, 2, 3, 4, 5, 6});
  rig.settle();
  const auto id = rig.client->submit({1});
  rig.settle();
  const auto& config = rig.scenario.node;
  std::vector<NodeId> expected;
  for (EpochNr e = 0; e < 3; ++e) {
    const NodeId l = bucket_leaders(e, {0, 1, 2, 3, 4, 5, 6}, config)[bucket_of(id, config.num_buckets())];
    if (std::find(expected.begin(), expected.end(), l) == expected.end()) expected.push_back(l);
  }
  CHECK(expected.size() == 3);  // the three epochs rotate the bucket to distinct leaders
  CHECK(rig.client->targets(id) == expected);
  CHECK(rig.copies(id) == 3);
}

TEST_CASE("adoption resubmits pending requests") {
  Rig rig;
  const auto id = rig.client->submit({1});
  rig.settle();
  CHECK(rig.copies(id) == 4);
  rig.announce(0, 2, {0, 1, 2, 3});
  rig.announce(1, 2, {0, 1, 2, 3});
  rig.settle();
  CHECK(rig.client->resubmissions() == 1);
  CHECK(rig.copies(id) == 4 + rig.client->targets(id).size());
}

TEST_CASE("a request completes at f+1 distinct valid responses") {
  Rig rig;
  const auto id = rig.client->submit({1});
  rig.settle();
  rig.respond(0, id);
  rig.respond(0, id);  // same node again
  rig.respond(2, id, 0, /*forge=*/true);
  rig.settle();
  CHECK(rig.client->completed() == 0);
  rig.respond(1, id);
  rig.settle();
  CHECK(rig.client->completed() == 1);
  CHECK(rig.client->pending() == 0);
  CHECK(events_of<trace::ClientComplete>(rig.recorder.trace()).size() == 1);
}

TEST_CASE("a full window queues submissions until a request completes") {
  Rig rig(4, 2);
  const auto a = rig.client->submit({1});
  rig.client->submit({2});
  rig.client->submit({3});
  CHECK(rig.client->submitted() == 2);
  CHECK(rig.client->pending() == 3);
  rig.settle();
  rig.respond(0, a);
  rig.respond(1, a);
  rig.settle();
  CHECK(rig.client->submitted() == 3);
  CHECK(rig.client->pending() == 2);
}

TEST_CASE("node-side validation checks signature, client and window in order") {
  NodeConfig config;
  config.watermark_window = 4;
  auto sigs = crypto::make_mac_scheme(1, config.n + 2);
  RequestValidator v(config, 2, *sigs);
  auto signed_request = [&](ClientId c, std::uint64_t t) {
    auto r = Request::make(RequestId{t, c}, {1});
    r.sig = sigs->sign(client_process(config, c), r.digest);
    return r;
  };
  CHECK(v.check(signed_request(0, 0)) == RequestValidator::Verdict::Ok);
  CHECK(v.check(signed_request(1, 3)) == RequestValidator::Verdict::Ok);
  CHECK(v.check(signed_request(1, 4)) == RequestValidator::Verdict::OutsideWindow);
  auto unsigned_request = Request::make(RequestId{0, 0}, {1});
  CHECK(v.check(unsigned_request) == RequestValidator::Verdict::BadSignature);
  auto stranger = Request::make(RequestId{0, 5}, {1});
  CHECK(v.check(stranger) == RequestValidator::Verdict::UnknownClient);
  auto tampered = signed_request(0, 1);
  tampered.payload = {2};
  CHECK(v.check(tampered) == RequestValidator::Verdict::BadSignature);
  v.set_low(1, 10);
  CHECK(v.check(signed_request(1, 9)) == RequestValidator::Verdict::OutsideWindow);
  CHECK(v.check(signed_request(1, 13)) == RequestValidator::Verdict::Ok);
  config.validate_signatures = false;
  CHECK(v.check(unsigned_request) == RequestValidator::Verdict::Ok);
}
