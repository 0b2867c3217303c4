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
#include "iss/domain.hpp"

using namespace iss;
using iss::testing::make_batch;
using iss::testing::make_request;

TEST_CASE("SnRange bounds") {
  SnRange r{12, 12};
  CHECK(r.min() == 12);
  CHECK(r.max() == 23);
  CHECK(r.end() == 24);
  CHECK(r.contains(23));
  CHECK_FALSE(r.contains(24));
  CHECK(SnRange{5, 0}.empty());
  CHECK(SnRange{3, 3}.to_vector() == std::vector<SeqNr>{3, 4, 5});
}

TEST_CASE("segment layout of two epochs with three then two leaders") {
  EpochLayout layout(12);
  layout.add_epoch({0, 1, 2});
  layout.add_epoch({0, 1});
  const auto e0 = layout.seq_nrs(0);
  CHECK(e0 == SnRange{0, 12});
  CHECK(segment_seq_nrs(e0, 0, 3) == std::vector<SeqNr>{0, 3, 6, 9});
  CHECK(segment_seq_nrs(e0, 1, 3) == std::vector<SeqNr>{1, 4, 7, 10});
  CHECK(segment_seq_nrs(e0, 2, 3) == std::vector<SeqNr>{2, 5, 8, 11});
  const auto e1 = layout.seq_nrs(1);
  CHECK(e1.max() == 23);
  CHECK(segment_seq_nrs(e1, 0, 2) == std::vector<SeqNr>{12, 14, 16, 18, 20, 22});
  CHECK(segment_seq_nrs(e1, 1, 2) == std::vector<SeqNr>{13, 15, 17, 19, 21, 23});
  CHECK(segment_seq_nrs(e0, 1, 3).back() == 10);
  CHECK(layout.epoch_of(17) == 1u);
  CHECK_FALSE(layout.epoch_of(24).has_value());
}

TEST_CASE("an empty leaderset consumes no sequence numbers") {
  EpochLayout layout(8);
  layout.add_epoch({0});
  layout.add_epoch({});
  layout.add_epoch({1, 2});
  CHECK(layout.seq_nrs(1).empty());
  CHECK(layout.seq_nrs(2).first == 8);
}

TEST_CASE("segments of an epoch partition its range") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    const SeqNr first = rng() % 1000;
    const SeqNr count = 1 + rng() % 64;
    const std::size_t leaders = 1 + rng() % 8;
    std::vector<int> hits(count, 0);
    for (std::size_t i = 0; i < leaders; ++i) {
      for (SeqNr sn : segment_seq_nrs({first, count}, i, leaders)) {
        REQUIRE(sn >= first);
        REQUIRE(sn < first + count);
        CHECK(sn % leaders == i);
        ++hits[sn - first];
      }
    }
    for (int h : hits) CHECK(h == 1);
  }
}

TEST_CASE("seg_of finds the unique segment") {
  std::vector<Segment> segs(2);
  segs[0].seq_nrs = {0, 2};
  segs[1].seq_nrs = {1, 3};
  segs[1].leader = 5;
  CHECK(seg_of(3, segs).leader == 5);
  CHECK_THROWS_AS(seg_of(4, segs), InvariantViolation);
}

TEST_CASE("request and batch digests") {
  // Values from an independent SHA-256 implementation over the canonical encoding.
  const auto r = make_request(1, 3, Bytes{1, 2});
  CHECK(to_hex(r->digest) == "3ce53d3a2dab09a5785c6e10b93f7080c67f2ab92ddb603f379bf13407a5691a");
  const auto b = Batch::of({r, make_request(2, 0)});
  CHECK(to_hex(b.digest()) == "d86010146b005b6d816d16c3ebb559be8d590a5535cce765baf8b040aca7b332");
  CHECK(Batch::nil().digest() == nil_digest());
  CHECK(Batch::of({}).digest() != nil_digest());
}

TEST_CASE("batch equality distinguishes nil from empty") {
  CHECK(Batch::nil() == Batch::nil());
  CHECK_FALSE(Batch::nil() == Batch::of({}));
  CHECK(make_batch({{1, 1}}) == make_batch({{1, 1}}));
  CHECK_FALSE(make_batch({{1, 1}}) == make_batch({{1, 2}}));
  CHECK(is_duplicate(*make_request(1, 1, {9}), *make_request(1, 1, {9})));
  CHECK_FALSE(is_duplicate(*make_request(1, 1, {9}), *make_request(1, 1, {8})));
}

TEST_CASE("log commit is final") {
  Log log;
  log.commit(0, make_batch({{0, 0}}));
  CHECK_NOTHROW(log.commit(0, make_batch({{0, 0}})));
  CHECK_THROWS_AS(log.commit(0, Batch::nil()), InvariantViolation);
}

TEST_CASE("delivery waits for gaps and numbers requests by prefix totals") {
  Log log;
  log.commit(1, make_batch({{0, 1}, {0, 2}}));
  CHECK(log.deliver_ready().empty());
  log.commit(0, make_batch({{1, 0}}));
  auto d = log.deliver_ready();
  REQUIRE(d.size() == 3);
  CHECK(d[0].snr == 0);
  CHECK(d[1].snr == 1);
  CHECK(d[2].snr == 2);
  CHECK(d[2].sn == 1);
  log.commit(2, Batch::nil());
  log.commit(3, Batch::of({}));
  log.commit(4, make_batch({{2, 0}}));
  d = log.deliver_ready();
  REQUIRE(d.size() == 1);
  CHECK(d[0].snr == 3);
  CHECK(d[0].sn == 4);
  CHECK(log.first_undelivered() == 5);
  CHECK(log.covers({0, 5}));
  CHECK_FALSE(log.covers({0, 6}));
}

TEST_CASE("log encoding distinguishes nil, empty and missing entries") {
  Log a, b;
  a.commit(0, Batch::nil());
  b.commit(0, Batch::of({}));
  CHECK(a.encode(0, 1) != b.encode(0, 1));
  Log c;
  CHECK(c.encode(0, 1) != a.encode(0, 1));
  Log d;
  d.commit(0, Batch::nil());
  CHECK(a.encode(0, 1) == d.encode(0, 1));
}
