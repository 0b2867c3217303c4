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

#include <cstdio>

#include "helpers.hpp"
#include "iss/trace.hpp"

using namespace iss;
using namespace iss::trace;

namespace {

Trace sample() {
  RunInfo info;
  info.seed = 9;
  info.n = 4;
  info.f = 1;
  info.orderer = "pbft";
  info.policy = "blacklist";
  info.faulty = {2};
  Digest d{};
  d[3] = 7;
  Trace t{info,
          ClientCast{10, {1, 2}, d},
          EpochStart{20, 1, 0, 0, 8, {0, 1}, {{0, {0, 2}, {1, 3}}, {1, {1, 3}, {0, 2}}}},
          SbInit{21, 1, {0, 1}, {1, 3}},
          SbDeliver{30, 1, {0, 1}, 3, true, nil_digest()},
          SmrDeliver{31, 1, 0, 3, {1, 2}, d},
          ProposalRejected{32, 2, {0, 0}, 4, RejectReason::Duplicate},
          FinalLog{40, 1, 1, 8, d, {d, Digest{}}},
          RunEnd{50, true, true}};
  return t;
}

}  // namespace

TEST_CASE("events survive encoding") {
  const auto t = sample();
  for (const auto& e : t) CHECK(encode(decode(encode(e))) == encode(e));
  const auto back = deserialize(serialize(t));
  REQUIRE(back.size() == t.size());
  CHECK(serialize(back) == serialize(t));
  CHECK(std::get<RunInfo>(back[0]).faulty == std::vector<NodeId>{2});
  CHECK(std::get<SbDeliver>(back[4]).nil);
}

TEST_CASE("time and name of events") {
  const auto t = sample();
  CHECK(time_of(t[1]) == 10);
  CHECK(name_of(t[5]) == "SmrDeliver");
}

TEST_CASE("truncated trace keeps the whole records") {
  const auto bytes = serialize(sample());
  bool truncated = false;
  const auto prefix = deserialize_prefix(std::span(bytes).first(bytes.size() - 3), &truncated);
  CHECK(truncated);
  CHECK(prefix.size() == sample().size() - 1);
  CHECK_THROWS(deserialize(std::span(bytes).first(bytes.size() - 3)));
  Bytes junk{'n', 'o', 'p', 'e'};
  CHECK_THROWS(deserialize(junk));
}

TEST_CASE("trace files") {
  const std::string path = "test_trace_roundtrip.bin";
  write_file(path, sample());
  bool truncated = true;
  const auto back = read_file(path, &truncated);
  CHECK_FALSE(truncated);
  CHECK(serialize(back) == serialize(sample()));
  std::remove(path.c_str());
}
