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

#include <functional>
#include <queue>
#include <random>
#include <unordered_set>
#include <vector>

#include "iss/messages.hpp"
#include "iss/types.hpp"

namespace iss::sim {

using TimerId = std::uint64_t;
constexpr ProcessId kNoOwner = ~ProcessId{0};

/// Single-threaded discrete-event core. Events are totally ordered by
/// (time, insertion sequence), so a run is a pure function of its inputs.
class Simulator {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return now_; }

  /// Schedules `fn` after `delay`. Events owned by a crashed process are
  /// dropped when they come due.
  TimerId schedule(SimTime delay, ProcessId owner, Action fn);
  void cancel(TimerId id);

  /// Runs until the queue drains, `horizon` passes, or `stop` returns true
  /// (checked after every event). Returns the time of the last event.
  SimTime run_until(SimTime horizon, const std::function<bool()>& stop = {});

  void crash(ProcessId p);
  bool crashed(ProcessId p) const { return p < crashed_.size() && crashed_[p]; }

  std::uint64_t events_processed() const { return processed_; }
  bool idle() const { return queue_.empty(); }

 private:
  struct Entry {
    SimTime time;
    std::uint64_t seq;
    ProcessId owner;
    mutable Action fn;
    bool operator>(const Entry& o) const {
      return time != o.time ? time > o.time : seq > o.seq;
    }
  };

  SimTime now_ = 0;
  std::uint64_t next_seq_ = 1;
  std::uint64_t processed_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
  std::unordered_set<TimerId> cancelled_;
  std::vector<bool> crashed_;
};

class Process {
 public:
  virtual ~Process() = default;
  virtual void start() {}
  virtual void receive(ProcessId from, const Payload& msg) = 0;
};

struct NetworkParams {
  SimTime mean_delay = 50 * kMillisecond;
  double jitter = 0.2;          // post-GST delay is mean * U[1-jitter, 1+jitter]
  SimTime gst = 0;
  double pre_gst_factor = 10;   // pre-GST delay is U[0, factor * mean]
  double egress_bytes_per_sec = 0;  // per node; 0 disables the bandwidth model
  std::size_t nodes = 0;        // processes below this id are nodes

  /// Upper bound on post-GST one-way delay between correct processes
  /// (before queueing at a bandwidth-limited sender).
  SimTime delta() const { return static_cast<SimTime>(mean_delay * (1 + jitter)); }
};

struct Partition {
  std::vector<ProcessId> isolated;
  SimTime start = 0;
  SimTime end = 0;
};

/// Partially synchronous network: messages between live processes are
/// delayed, never dropped, except across an active partition.
class Network {
 public:
  Network(Simulator& sim, NetworkParams params, std::uint64_t seed);

  void attach(ProcessId id, Process* p);
  void add_partition(Partition p) { partitions_.push_back(std::move(p)); }

  void send(ProcessId from, ProcessId to, PayloadPtr msg);
  void send(ProcessId from, ProcessId to, Payload msg) {
    send(from, to, std::make_shared<const Payload>(std::move(msg)));
  }

  const NetworkParams& params() const { return params_; }
  std::uint64_t messages_sent() const { return sent_; }
  std::uint64_t bytes_sent() const { return bytes_; }

 private:
  SimTime sample_delay();
  bool cut(ProcessId a, ProcessId b, SimTime t) const;

  Simulator& sim_;
  NetworkParams params_;
  std::mt19937_64 rng_;
  std::vector<Process*> procs_;
  std::vector<SimTime> link_free_;
  std::vector<Partition> partitions_;
  std::uint64_t sent_ = 0;
  std::uint64_t bytes_ = 0;
};

}  // namespace iss::sim
