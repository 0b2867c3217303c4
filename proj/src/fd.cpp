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

#include "iss/fd.hpp"

namespace iss::fd {

FailureDetector::FailureDetector(NodeId self, std::size_t n, SimTime initial_timeout)
    : self_(self), timeouts_(n, initial_timeout) {}

std::vector<Event> FailureDetector::on_heartbeat(NodeId p) {
  if (p == self_ || p >= timeouts_.size()) return {};
  if (suspected_.erase(p)) return {{Kind::Restore, p}};
  return {};
}

std::vector<Event> FailureDetector::on_timer_expiry(NodeId p) {
  if (p == self_ || p >= timeouts_.size()) return {};
  timeouts_[p] *= 2;
  if (suspected_.insert(p).second) return {{Kind::Suspect, p}};
  return {};
}

}  // namespace iss::fd
