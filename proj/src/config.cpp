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

#include "iss/config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace iss {

std::string_view to_string(FaultModel m) {
  return m == FaultModel::Byzantine ? "byzantine" : "crash";
}

std::string_view to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::Simple: return "simple";
    case PolicyKind::Backoff: return "backoff";
    case PolicyKind::Blacklist: return "blacklist";
  }
  return "?";
}

std::string_view to_string(OrdererKind o) {
  switch (o) {
    case OrdererKind::Pbft: return "pbft";
    case OrdererKind::Raft: return "raft";
    case OrdererKind::Reference: return "reference";
  }
  return "?";
}

std::string_view to_string(ConsensusKind c) { return c == ConsensusKind::Ideal ? "ideal" : "pbft"; }

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(fmt::format("{}: {}", key, what));
}

void flatten(const YAML::Node& node, const std::string& prefix, FlatConfig& out) {
  if (!node.IsMap()) fail(prefix.empty() ? "<root>" : prefix, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    const auto full = prefix.empty() ? key : prefix + "." + key;
    const YAML::Node& value = kv.second;
    if (full == "faults") {
      if (value.IsNull()) continue;
      if (!value.IsSequence()) fail("faults", "expected a list");
      for (const auto& item : value) {
        if (!item.IsMap()) fail("faults", "each fault must be a mapping");
        std::map<std::string, std::string> fault;
        for (const auto& f : item) fault[f.first.as<std::string>()] = f.second.as<std::string>();
        out.faults.push_back(std::move(fault));
      }
    } else if (value.IsMap()) {
      flatten(value, full, out);
    } else if (value.IsScalar()) {
      out.values[full] = value.as<std::string>();
    } else {
      fail(full, "expected a scalar value");
    }
  }
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) fail(key, "expected a non-negative integer, got '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail(key, "expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  const auto s = lower(v);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  fail(key, "expected a boolean, got '" + v + "'");
}

/// Durations take a unit suffix (ns, us, ms, s); a bare number is seconds.
SimTime parse_duration(const std::string& key, const std::string& v) {
  static const std::pair<std::string_view, SimTime> units[] = {
      {"ns", kNanosecond}, {"us", kMicrosecond}, {"ms", kMillisecond}, {"s", kSecond}};
  for (const auto& [suffix, scale] : units) {
    if (v.size() > suffix.size() && v.compare(v.size() - suffix.size(), suffix.size(), suffix) == 0) {
      const auto number = v.substr(0, v.size() - suffix.size());
      const double d = parse_double(key, number);
      if (d < 0) fail(key, "duration must be non-negative");
      return static_cast<SimTime>(d * static_cast<double>(scale) + 0.5);
    }
  }
  const double d = parse_double(key, v);
  if (d < 0) fail(key, "duration must be non-negative");
  return from_seconds(d);
}

template <typename E>
E parse_enum(const std::string& key, const std::string& v,
             std::initializer_list<std::pair<std::string_view, E>> options) {
  const auto s = lower(v);
  std::string names;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    names += names.empty() ? std::string(name) : ", " + std::string(name);
  }
  fail(key, "expected one of " + names + ", got '" + v + "'");
}

FaultSpec build_fault(const std::map<std::string, std::string>& m, std::size_t index) {
  const auto where = fmt::format("faults[{}]", index);
  FaultSpec f;
  bool has_type = false;
  bool has_node = false;
  for (const auto& [k, v] : m) {
    const auto key = where + "." + k;
    if (k == "type") {
      f.type = parse_enum<FaultType>(key, v,
                                     {{"crash", FaultType::Crash},
                                      {"straggler", FaultType::Straggler},
                                      {"equivocator", FaultType::Equivocator},
                                      {"wrongcheckpoint", FaultType::WrongCheckpoint},
                                      {"partition", FaultType::Partition}});
      has_type = true;
    } else if (k == "node") {
      f.node = static_cast<NodeId>(parse_uint(key, v));
      has_node = true;
    } else if (k == "trigger") {
      f.trigger = parse_enum<TriggerType>(key, v,
                                          {{"time", TriggerType::Time},
                                           {"epochstart", TriggerType::EpochStart},
                                           {"epochend", TriggerType::EpochEnd}});
    } else if (k == "at") {
      f.at = parse_duration(key, v);
    } else if (k == "epoch") {
      f.epoch = parse_uint(key, v);
    } else if (k == "until") {
      f.until = parse_duration(key, v);
    } else {
      fail(key, "unknown configuration key");
    }
  }
  if (!has_type) fail(where + ".type", "missing required key");
  if (!has_node) fail(where + ".node", "missing required key");
  return f;
}

}  // namespace

FlatConfig parse_config_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  FlatConfig out;
  if (root.IsNull()) return out;
  flatten(root, "", out);
  return out;
}

FlatConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

ScenarioConfig build_config(const FlatConfig& flat) {
  ScenarioConfig c;
  auto& nc = c.node;

  for (const char* required : {"n", "f", "orderer", "policy", "epochLength", "horizon"}) {
    if (!flat.values.count(required)) fail(required, "missing required key");
  }

  for (const auto& [k, v] : flat.values) {
    if (k == "n") nc.n = parse_uint(k, v);
    else if (k == "f") nc.f = parse_uint(k, v);
    else if (k == "faultModel")
      nc.fault_model = parse_enum<FaultModel>(k, v, {{"byzantine", FaultModel::Byzantine},
                                                     {"crash", FaultModel::CrashOnly}});
    else if (k == "orderer")
      nc.orderer = parse_enum<OrdererKind>(k, v, {{"pbft", OrdererKind::Pbft},
                                                  {"raft", OrdererKind::Raft},
                                                  {"reference", OrdererKind::Reference}});
    else if (k == "consensus")
      nc.consensus = parse_enum<ConsensusKind>(k, v, {{"ideal", ConsensusKind::Ideal},
                                                      {"pbft", ConsensusKind::Pbft}});
    else if (k == "policy")
      nc.policy = parse_enum<PolicyKind>(k, v, {{"simple", PolicyKind::Simple},
                                                {"backoff", PolicyKind::Backoff},
                                                {"blacklist", PolicyKind::Blacklist}});
    else if (k == "epochLength") nc.epoch_length = parse_uint(k, v);
    else if (k == "minSegmentSize") nc.min_segment_size = parse_uint(k, v);
    else if (k == "bucketsPerLeader") nc.buckets_per_leader = static_cast<std::uint32_t>(parse_uint(k, v));
    else if (k == "leaderSetSize") nc.leader_set_size = parse_uint(k, v);
    else if (k == "maxBatchSize") nc.max_batch_size = parse_uint(k, v);
    else if (k == "batchRate") nc.batch_rate = parse_double(k, v);
    else if (k == "minBatchTimeout") nc.min_batch_timeout = parse_duration(k, v);
    else if (k == "maxBatchTimeout") nc.max_batch_timeout = parse_duration(k, v);
    else if (k == "epochChangeTimeout") nc.epoch_change_timeout = parse_duration(k, v);
    else if (k == "maxInFlight") nc.max_in_flight = parse_uint(k, v);
    else if (k == "banPeriod") nc.ban_period = parse_uint(k, v);
    else if (k == "backoffDecrease") nc.backoff_decrease = parse_uint(k, v);
    else if (k == "watermarkWindow") nc.watermark_window = parse_uint(k, v);
    else if (k == "epochs") nc.max_epochs = parse_uint(k, v);
    else if (k == "validateSignatures") nc.validate_signatures = parse_bool(k, v);
    else if (k == "signatures")
      nc.signatures = parse_enum<SignatureKind>(k, v, {{"mac", SignatureKind::Mac},
                                                       {"ed25519", SignatureKind::Ed25519}});
    else if (k == "fdBrbHeartbeats") nc.fd_brb_heartbeats = parse_bool(k, v);
    else if (k == "unsafeQuorum") nc.unsafe_quorum = parse_uint(k, v);
    else if (k == "horizon") c.horizon = parse_duration(k, v);
    else if (k == "livenessMargin") c.liveness_margin = parse_duration(k, v);
    else if (k == "trace")
      c.trace_detail = parse_enum<TraceDetail>(k, v, {{"full", TraceDetail::Full},
                                                      {"compact", TraceDetail::Compact}});
    else if (k == "network.meanDelay") c.network.mean_delay = parse_duration(k, v);
    else if (k == "network.jitter") c.network.jitter = parse_double(k, v);
    else if (k == "network.gst") c.network.gst = parse_duration(k, v);
    else if (k == "network.preGstFactor") c.network.pre_gst_factor = parse_double(k, v);
    else if (k == "network.egressBandwidth") c.network.egress_bandwidth = parse_double(k, v);
    else if (k == "clients.count") c.clients.count = parse_uint(k, v);
    else if (k == "clients.rate") c.clients.rate = parse_double(k, v);
    else if (k == "clients.payloadSize") c.clients.payload_size = parse_uint(k, v);
    else if (k == "clients.start") c.clients.start = parse_duration(k, v);
    else if (k == "clients.duration") c.clients.duration = parse_duration(k, v);
    else fail(k, "unknown configuration key");
  }
  nc.mean_delay = c.network.mean_delay;

  for (std::size_t i = 0; i < flat.faults.size(); ++i) c.faults.push_back(build_fault(flat.faults[i], i));

  c.validate();
  return c;
}

void NodeConfig::validate() const {
  if (n == 0) fail("n", "must be at least 1");
  if (fault_model == FaultModel::Byzantine && n < 3 * f + 1)
    fail("f", fmt::format("byzantine model needs n >= 3f+1 (n={}, f={})", n, f));
  if (fault_model == FaultModel::CrashOnly && n < 2 * f + 1)
    fail("f", fmt::format("crash model needs n >= 2f+1 (n={}, f={})", n, f));
  if (orderer == OrdererKind::Raft && fault_model != FaultModel::CrashOnly)
    fail("orderer", "raft tolerates crash faults only; set faultModel: crash");
  if (orderer == OrdererKind::Reference && fault_model != FaultModel::Byzantine)
    fail("orderer", "the reference orderer runs in the byzantine model");
  if (epoch_length == 0) fail("epochLength", "must be at least 1");
  if (min_segment_size == 0) fail("minSegmentSize", "must be at least 1");
  if (epoch_length < min_segment_size * effective_leader_set_size())
    fail("epochLength", fmt::format("must be at least minSegmentSize x leaders ({} x {})",
                                    min_segment_size, effective_leader_set_size()));
  if (buckets_per_leader == 0) fail("bucketsPerLeader", "must be at least 1");
  if (max_batch_size == 0) fail("maxBatchSize", "must be at least 1");
  if (batch_rate < 0) fail("batchRate", "must be non-negative");
  if (min_batch_timeout > max_batch_timeout) fail("minBatchTimeout", "exceeds maxBatchTimeout");
  if (epoch_change_timeout <= 0) fail("epochChangeTimeout", "must be positive");
  if (max_in_flight == 0) fail("maxInFlight", "must be at least 1");
  if (watermark_window == 0) fail("watermarkWindow", "must be at least 1");
  if (mean_delay <= 0) fail("network.meanDelay", "must be positive");
  if (unsafe_quorum > n) fail("unsafeQuorum", "exceeds n");
}

void ScenarioConfig::validate() const {
  node.validate();
  if (horizon <= 0) fail("horizon", "must be positive");
  if (network.jitter < 0 || network.jitter >= 1) fail("network.jitter", "must lie in [0, 1)");
  if (network.pre_gst_factor < 0) fail("network.preGstFactor", "must be non-negative");
  if (network.egress_bandwidth < 0) fail("network.egressBandwidth", "must be non-negative");
  if (clients.rate < 0) fail("clients.rate", "must be non-negative");

  std::set<NodeId> faulty;
  for (std::size_t i = 0; i < faults.size(); ++i) {
    const auto& f = faults[i];
    const auto where = fmt::format("faults[{}]", i);
    if (f.node >= node.n) fail(where + ".node", "no such node");
    const bool byzantine_only = f.type == FaultType::Straggler || f.type == FaultType::Equivocator ||
                                f.type == FaultType::WrongCheckpoint;
    if (byzantine_only && node.fault_model != FaultModel::Byzantine)
      fail(where + ".type", "byzantine behaviour in a crash-only configuration");
    if (f.type == FaultType::Partition) {
      if (f.trigger != TriggerType::Time) fail(where + ".trigger", "partitions are time-triggered");
      if (f.until <= f.at) fail(where + ".until", "must be after 'at'");
      continue;
    }
    faulty.insert(f.node);
  }
  if (faulty.size() > node.f)
    fail("faults", fmt::format("{} faulty nodes exceed f={}", faulty.size(), node.f));
}

std::string describe(const ScenarioConfig& c) {
  const auto& n = c.node;
  std::string out;
  out += fmt::format("n={} f={} faultModel={} orderer={} policy={}\n", n.n, n.f,
                     to_string(n.fault_model), to_string(n.orderer), to_string(n.policy));
  if (n.orderer == OrdererKind::Reference) out += fmt::format("consensus={}\n", to_string(n.consensus));
  out += fmt::format(
      "epochLength={} leaders={} buckets={} maxBatchSize={} batchRate={} epochChangeTimeout={}s\n",
      n.epoch_length, n.effective_leader_set_size(), n.num_buckets(), n.max_batch_size,
      n.batch_rate, to_seconds(n.epoch_change_timeout));
  out += fmt::format("network: meanDelay={}ms jitter={} gst={}s egress={}B/s\n",
                     to_seconds(c.network.mean_delay) * 1e3, c.network.jitter,
                     to_seconds(c.network.gst), c.network.egress_bandwidth);
  out += fmt::format("clients: count={} rate={}/s payload={}B duration={}s\n", c.clients.count,
                     c.clients.rate, c.clients.payload_size, to_seconds(c.clients.duration));
  out += fmt::format("faults={} horizon={}s\n", c.faults.size(), to_seconds(c.horizon));
  return out;
}

}  // namespace iss
