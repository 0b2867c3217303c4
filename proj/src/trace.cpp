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

#include "iss/trace.hpp"

#include <fstream>
#include <iterator>

#include <fmt/core.h>

namespace iss::trace {

namespace {

constexpr std::string_view kMagic = "ISSTRACE";
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(Bytes& out) : out_(out) {}

  void put(std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void operator()(bool& v) { put(v ? 1 : 0, 1); }
  void operator()(std::uint8_t& v) { put(v, 1); }
  void operator()(std::uint32_t& v) { put(v, 4); }
  void operator()(std::uint64_t& v) { put(v, 8); }
  void operator()(std::int64_t& v) { put(static_cast<std::uint64_t>(v), 8); }
  void operator()(Digest& d) { out_.insert(out_.end(), d.begin(), d.end()); }
  void operator()(std::string& s) {
    put(s.size(), 4);
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void operator()(RequestId& id) { put(id.c, 8), put(id.t, 8); }
  void operator()(InstanceKey& k) { put(k.epoch, 8), put(k.leader, 4); }
  void operator()(RejectReason& r) { put(static_cast<std::uint8_t>(r), 1); }
  void operator()(FaultKind& k) { put(static_cast<std::uint8_t>(k), 1); }
  void operator()(SegmentInfo& s);
  template <typename T>
  void operator()(std::vector<T>& v) {
    put(v.size(), 4);
    for (auto& x : v) (*this)(x);
  }

  template <typename... Ts>
  void fields(Ts&... ts) {
    ((*this)(ts), ...);
  }

 private:
  Bytes& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint64_t get(int width) {
    if (pos_ + width > in_.size()) throw std::runtime_error("trace record truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 8) | in_[pos_++];
    return v;
  }

  void operator()(bool& v) { v = get(1) != 0; }
  void operator()(std::uint8_t& v) { v = static_cast<std::uint8_t>(get(1)); }
  void operator()(std::uint32_t& v) { v = static_cast<std::uint32_t>(get(4)); }
  void operator()(std::uint64_t& v) { v = get(8); }
  void operator()(std::int64_t& v) { v = static_cast<std::int64_t>(get(8)); }
  void operator()(Digest& d) {
    for (auto& b : d) b = static_cast<std::uint8_t>(get(1));
  }
  void operator()(std::string& s) {
    auto len = get(4);
    if (pos_ + len > in_.size()) throw std::runtime_error("trace record truncated");
    s.assign(reinterpret_cast<const char*>(in_.data() + pos_), len);
    pos_ += len;
  }
  void operator()(RequestId& id) { id.c = get(8), id.t = get(8); }
  void operator()(InstanceKey& k) { k.epoch = get(8), k.leader = static_cast<NodeId>(get(4)); }
  void operator()(RejectReason& r) { r = static_cast<RejectReason>(get(1)); }
  void operator()(FaultKind& k) { k = static_cast<FaultKind>(get(1)); }
  void operator()(SegmentInfo& s);
  template <typename T>
  void operator()(std::vector<T>& v) {
    auto len = get(4);
    if (len > in_.size()) throw std::runtime_error("trace vector length out of range");
    v.resize(len);
    for (auto& x : v) (*this)(x);
  }

  template <typename... Ts>
  void fields(Ts&... ts) {
    ((*this)(ts), ...);
  }

  bool at_end() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

template <typename A>
void io(A& a, RunInfo& e) {
  a.fields(e.seed, e.n, e.f, e.byzantine_model, e.orderer, e.policy, e.epoch_length, e.num_buckets,
           e.leader_set_size, e.clients, e.max_epochs, e.sb_only, e.compact, e.liveness_margin,
           e.faulty);
}
template <typename A>
void io(A& a, ClientCast& e) { a.fields(e.t, e.id, e.digest); }
template <typename A>
void io(A& a, ClientComplete& e) { a.fields(e.t, e.id); }
template <typename A>
void io(A& a, SegmentInfo& e) { a.fields(e.leader, e.seq_nrs, e.buckets); }
template <typename A>
void io(A& a, EpochStart& e) {
  a.fields(e.t, e.node, e.epoch, e.first_sn, e.length, e.leaders, e.segments);
}
template <typename A>
void io(A& a, EpochComplete& e) { a.fields(e.t, e.node, e.epoch); }
template <typename A>
void io(A& a, SbInit& e) { a.fields(e.t, e.node, e.key, e.seq_nrs); }
template <typename A>
void io(A& a, SbCast& e) { a.fields(e.t, e.node, e.key, e.sn, e.digest); }
template <typename A>
void io(A& a, SbDeliver& e) { a.fields(e.t, e.node, e.key, e.sn, e.nil, e.digest); }
template <typename A>
void io(A& a, SbSuspect& e) { a.fields(e.t, e.node, e.key, e.suspected); }
template <typename A>
void io(A& a, TransferInstall& e) { a.fields(e.t, e.node, e.epoch, e.sn, e.nil, e.digest); }
template <typename A>
void io(A& a, SmrDeliver& e) { a.fields(e.t, e.node, e.snr, e.sn, e.id, e.digest); }
template <typename A>
void io(A& a, ProposalRejected& e) { a.fields(e.t, e.node, e.key, e.sn, e.reason); }
template <typename A>
void io(A& a, ViewChange& e) { a.fields(e.t, e.node, e.key, e.view); }
template <typename A>
void io(A& a, LeaderElected& e) { a.fields(e.t, e.node, e.key, e.term); }
template <typename A>
void io(A& a, CheckpointStable& e) { a.fields(e.t, e.node, e.epoch, e.root, e.signers); }
template <typename A>
void io(A& a, StateTransfer& e) {
  a.fields(e.t, e.node, e.peer, e.first_epoch, e.last_epoch, e.accepted);
}
template <typename A>
void io(A& a, Fault& e) { a.fields(e.t, e.node, e.kind); }
template <typename A>
void io(A& a, FinalLog& e) {
  a.fields(e.t, e.node, e.completed_epochs, e.extent, e.log_digest, e.epoch_roots);
}
template <typename A>
void io(A& a, RunEnd& e) { a.fields(e.t, e.liveness_evaluable, e.completed); }

void Writer::operator()(SegmentInfo& s) { io(*this, s); }
void Reader::operator()(SegmentInfo& s) { io(*this, s); }

template <std::size_t I = 0>
Event make_alternative(std::size_t index) {
  if constexpr (I < std::variant_size_v<Event>) {
    if (index == I) return Event{std::in_place_index<I>};
    return make_alternative<I + 1>(index);
  } else {
    throw std::runtime_error(fmt::format("unknown trace record type {}", index));
  }
}

}  // namespace

Bytes encode(const Event& e) {
  Bytes out;
  Writer w(out);
  w.put(e.index(), 1);
  auto copy = e;
  std::visit([&w](auto& ev) { io(w, ev); }, copy);
  return out;
}

Event decode(std::span<const std::uint8_t> record) {
  Reader r(record);
  auto ev = make_alternative(r.get(1));
  std::visit([&r](auto& x) { io(r, x); }, ev);
  if (!r.at_end()) throw std::runtime_error("trailing bytes in trace record");
  return ev;
}

Bytes serialize(const Trace& trace) {
  Bytes out(kMagic.begin(), kMagic.end());
  Writer w(out);
  w.put(kVersion, 4);
  for (const auto& e : trace) {
    auto rec = encode(e);
    w.put(rec.size(), 4);
    out.insert(out.end(), rec.begin(), rec.end());
  }
  return out;
}

Trace deserialize_prefix(std::span<const std::uint8_t> data, bool* truncated) {
  if (data.size() < kMagic.size() + 4 ||
      !std::equal(kMagic.begin(), kMagic.end(), data.begin())) {
    throw std::runtime_error("not a trace file");
  }
  Reader header(data.subspan(kMagic.size(), 4));
  if (header.get(4) != kVersion) throw std::runtime_error("unsupported trace version");
  Trace out;
  std::size_t pos = kMagic.size() + 4;
  bool cut = false;
  while (pos < data.size()) {
    if (pos + 4 > data.size()) {
      cut = true;
      break;
    }
    Reader len(data.subspan(pos, 4));
    auto size = len.get(4);
    pos += 4;
    if (pos + size > data.size()) {
      cut = true;
      break;
    }
    out.push_back(decode(data.subspan(pos, size)));
    pos += size;
  }
  if (truncated) *truncated = cut;
  return out;
}

Trace deserialize(std::span<const std::uint8_t> data) {
  bool cut = false;
  auto out = deserialize_prefix(data, &cut);
  if (cut) throw std::runtime_error("trace file truncated");
  return out;
}

void write_file(const std::string& path, const Trace& trace) {
  auto bytes = serialize(trace);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot open {} for writing", path));
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Trace read_file(const std::string& path, bool* truncated) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot open {}", path));
  Bytes bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize_prefix(bytes, truncated);
}

SimTime time_of(const Event& e) {
  return std::visit(
      [](const auto& x) -> SimTime {
        if constexpr (requires { x.t; }) {
          return x.t;
        } else {
          return 0;
        }
      },
      e);
}

std::string_view name_of(const Event& e) {
  static constexpr std::string_view kNames[] = {
      "RunInfo",       "ClientCast",       "ClientComplete", "EpochStart",     "EpochComplete",
      "SbInit",        "SbCast",           "SbDeliver",      "SbSuspect",      "TransferInstall",
      "SmrDeliver",    "ProposalRejected", "ViewChange",     "LeaderElected",  "CheckpointStable",
      "StateTransfer", "Fault",            "FinalLog",       "RunEnd"};
  return kNames[e.index()];
}

}  // namespace iss::trace
