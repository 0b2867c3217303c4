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

#include "iss/types.hpp"

namespace iss {

enum class FaultModel { Byzantine, CrashOnly };
enum class PolicyKind { Simple, Backoff, Blacklist };
enum class OrdererKind { Pbft, Raft, Reference };
enum class ConsensusKind { Ideal, Pbft };  // agreement layer behind the reference SB
enum class SignatureKind { Mac, Ed25519 };

std::string_view to_string(FaultModel m);
std::string_view to_string(PolicyKind p);
std::string_view to_string(OrdererKind o);
std::string_view to_string(ConsensusKind c);

/// Protocol parameters shared by every node of a run. Names follow the
/// configuration table of the evaluation.
struct NodeConfig {
  std::size_t n = 4;
  std::size_t f = 1;
  FaultModel fault_model = FaultModel::Byzantine;
  OrdererKind orderer = OrdererKind::Pbft;
  ConsensusKind consensus = ConsensusKind::Ideal;
  PolicyKind policy = PolicyKind::Blacklist;

  std::uint64_t epoch_length = 16;
  std::uint64_t min_segment_size = 1;
  std::uint32_t buckets_per_leader = 16;
  std::size_t leader_set_size = 0;  // 0 = all nodes
  std::size_t max_batch_size = 64;
  double batch_rate = 0;  // batches per second across all leaders; 0 = unlimited
  SimTime min_batch_timeout = 0;
  SimTime max_batch_timeout = 200 * kMillisecond;
  SimTime epoch_change_timeout = 2 * kSecond;
  std::size_t max_in_flight = 4;  // pre-prepares in flight per segment
  std::uint64_t ban_period = 8;
  std::uint64_t backoff_decrease = 1;
  std::uint64_t watermark_window = 128;
  std::uint64_t max_epochs = 0;  // 0 = run epochs until the horizon
  bool validate_signatures = true;
  SignatureKind signatures = SignatureKind::Mac;

  SimTime mean_delay = 50 * kMillisecond;  // basis of detector and Raft timer defaults
  bool fd_brb_heartbeats = false;

  // Deliberately unsafe PBFT quorum (0 = standard 2f+1); negative tests only.
  std::size_t unsafe_quorum = 0;

  std::uint32_t num_buckets() const {
    return buckets_per_leader * static_cast<std::uint32_t>(n);
  }
  std::size_t effective_leader_set_size() const {
    return leader_set_size == 0 ? n : std::min(leader_set_size, n);
  }
  /// Quorum for agreement and checkpoints: 2f+1 (Byzantine) or a majority
  /// (crash-only).
  std::size_t strong_quorum() const {
    if (fault_model == FaultModel::CrashOnly) return n / 2 + 1;
    return unsafe_quorum ? unsafe_quorum : 2 * f + 1;
  }
  std::size_t weak_quorum() const { return f + 1; }
  SimTime heartbeat_period() const { return mean_delay; }
  SimTime detector_timeout() const { return 4 * mean_delay; }

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

struct NetworkConfig {
  SimTime mean_delay = 50 * kMillisecond;
  double jitter = 0.2;
  SimTime gst = 0;
  double pre_gst_factor = 10;
  double egress_bandwidth = 0;  // bytes per second per node; 0 = unlimited
};

struct ClientsConfig {
  std::size_t count = 4;
  double rate = 20;  // requests per second per client
  std::size_t payload_size = 64;
  SimTime start = 0;
  SimTime duration = 5 * kSecond;
};

enum class FaultType { Crash, Straggler, Equivocator, WrongCheckpoint, Partition };
enum class TriggerType { Time, EpochStart, EpochEnd };

struct FaultSpec {
  FaultType type = FaultType::Crash;
  NodeId node = 0;
  TriggerType trigger = TriggerType::Time;
  SimTime at = 0;
  EpochNr epoch = 0;
  SimTime until = 0;  // partition end
};

enum class TraceDetail { Full, Compact };  // compact: SMR deliveries of one node only

struct ScenarioConfig {
  NodeConfig node;
  NetworkConfig network;
  ClientsConfig clients;
  std::vector<FaultSpec> faults;
  SimTime horizon = 30 * kSecond;
  SimTime liveness_margin = 0;  // 0 = 4 x epochChangeTimeout
  TraceDetail trace_detail = TraceDetail::Full;

  void validate() const;
  SimTime effective_liveness_margin() const {
    return liveness_margin ? liveness_margin : 4 * node.epoch_change_timeout;
  }
};

/// Flat key/value view of a configuration document (dotted keys, plus
/// the `faults` list), so that individual keys can be overridden.
struct FlatConfig {
  std::map<std::string, std::string> values;
  std::vector<std::map<std::string, std::string>> faults;

  void set(const std::string& key, const std::string& value) { values[key] = value; }
};

FlatConfig parse_config_text(const std::string& text);
FlatConfig load_config_file(const std::string& path);
ScenarioConfig build_config(const FlatConfig& flat);
std::string describe(const ScenarioConfig& c);

}  // namespace iss
