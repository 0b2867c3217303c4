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
#include <set>

#include "iss/config.hpp"
#include "iss/crypto.hpp"
#include "iss/recorder.hpp"
#include "iss/sim.hpp"

namespace iss {

/// Node-side admission of client requests: signature, known client and
/// watermark window, in that order.
class RequestValidator {
 public:
  enum class Verdict { Ok, BadSignature, UnknownClient, OutsideWindow };

  RequestValidator(const NodeConfig& config, std::size_t num_clients,
                   const crypto::SignatureScheme& sigs);

  Verdict check(const Request& r) const;

  /// Low watermark of client c: its lowest timestamp not yet delivered as
  /// of the last epoch end. Timestamps in [low, low + window) are admitted.
  std::uint64_t low(ClientId c) const { return low_.at(c); }
  void set_low(ClientId c, std::uint64_t t) { low_.at(c) = t; }
  std::size_t num_clients() const { return low_.size(); }

 private:
  const NodeConfig& config_;
  const crypto::SignatureScheme& sigs_;
  std::vector<std::uint64_t> low_;
};

/// Process id of client c (clients follow the nodes).
inline ProcessId client_process(const NodeConfig& config, ClientId c) {
  return static_cast<ProcessId>(config.n + c);
}

/// Buckets' leaders for an epoch, assuming `leaders` (sorted) lead it.
std::vector<NodeId> bucket_leaders(EpochNr e, const std::vector<NodeId>& leaders,
                                   const NodeConfig& config);

/// A simulated client submitting requests at a fixed rate.
class Client : public sim::Process {
 public:
  Client(ClientId id, const ScenarioConfig& scenario, sim::Simulator& sim, sim::Network& net,
         const crypto::SignatureScheme& sigs, Recorder& recorder);

  void start() override;
  void receive(ProcessId from, const Payload& msg) override;

  /// Submits one request now, or queues it while the window is exhausted.
  RequestId submit(Bytes payload);

  /// Nodes a request goes to under the adopted assignment.
  std::vector<NodeId> targets(const RequestId& id) const;

  ClientId id() const { return id_; }
  std::size_t submitted() const { return submitted_; }
  std::size_t completed() const { return completed_; }
  std::size_t pending() const { return pending_.size() + queued_.size(); }
  std::optional<EpochNr> adopted_epoch() const { return adopted_epoch_; }
  std::uint64_t resubmissions() const { return resubmissions_; }
  bool finished_submitting() const { return finished_; }

 private:
  struct Pending {
    RequestPtr request;
    std::set<NodeId> responders;
  };

  void tick();
  void send(const RequestPtr& r);
  void on_response(ProcessId from, const ResponseMsg& m);
  void on_assignment(ProcessId from, const AssignmentMsg& m);
  void drain_queue();
  std::uint64_t window_low() const;

  ClientId id_;
  ProcessId pid_;
  const ScenarioConfig& scenario_;
  const NodeConfig& config_;
  sim::Simulator& sim_;
  sim::Network& net_;
  const crypto::SignatureScheme& sigs_;
  Recorder& recorder_;

  std::uint64_t next_t_ = 0;
  std::map<std::uint64_t, Pending> pending_;  // by timestamp
  std::vector<Bytes> queued_;                 // payloads waiting for window space
  std::size_t submitted_ = 0;
  std::size_t completed_ = 0;
  std::uint64_t resubmissions_ = 0;
  bool finished_ = false;

  std::optional<EpochNr> adopted_epoch_;
  std::vector<NodeId> leaders_;
  std::map<std::pair<EpochNr, std::vector<NodeId>>, std::set<NodeId>> announcements_;
};

}  // namespace iss
