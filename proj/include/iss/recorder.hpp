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

#include "iss/config.hpp"
#include "iss/trace.hpp"

namespace iss {

/// Collects the trace of one run. In compact mode per-request delivery
/// records are kept for a single node only.
class Recorder {
 public:
  explicit Recorder(TraceDetail detail = TraceDetail::Full, NodeId compact_node = 0)
      : detail_(detail), compact_node_(compact_node) {}

  void record(trace::Event ev) {
    if (detail_ == TraceDetail::Compact) {
      if (const auto* d = std::get_if<trace::SmrDeliver>(&ev); d && d->node != compact_node_) return;
    }
    trace_.push_back(std::move(ev));
  }

  const trace::Trace& trace() const { return trace_; }
  trace::Trace take() { return std::move(trace_); }

 private:
  TraceDetail detail_;
  NodeId compact_node_;
  trace::Trace trace_;
};

}  // namespace iss
