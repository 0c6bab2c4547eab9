// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "reference_sim.hpp"
#include "tisim/errors.hpp"
#include "tisim/interconnect.hpp"

namespace tisim {
namespace {

using ref::Request;
using ref::Scenario;

Request rd(std::uint32_t m, Cycle at, std::uint32_t size = 4) {
  return {m, TxnKind::kRead, size, at};
}
Request wr(std::uint32_t m, Cycle at, std::uint32_t size = 4) {
  return {m, TxnKind::kWrite, size, at};
}

Cycle makespan(const ref::Result& r) {
  Cycle end = 0;
  for (const auto& t : r.timing) end = std::max(end, t.complete + 1);
  return end;
}

// Hand-traced examples are checked against both models.
ref::Result both(const Scenario& s) {
  const auto a = ref::reference_run(s);
  const auto b = ref::production_run(s);
  EXPECT_EQ(a.timing, b.timing) << s.describe();
  return b;
}

TEST(AhbBus, SingleRead) {
  Scenario s{.first_latency = 2, .masters = 1, .requests = {rd(0, 0)}};
  const auto r = both(s);
  EXPECT_EQ(r.timing[0].grant, 0u);
  EXPECT_EQ(r.timing[0].complete, 3u);
}

TEST(AhbBus, FixedPriorityTwoMasters) {
  Scenario s{.first_latency = 2, .masters = 2, .requests = {rd(1, 0), rd(0, 0)}};
  const auto r = both(s);
  EXPECT_EQ(r.timing[1].complete, 3u);
  EXPECT_EQ(r.timing[0].grant, 3u);
  EXPECT_EQ(r.timing[0].complete, 6u);
}

TEST(AhbBus, RoundRobinAlternates) {
  Scenario s{.first_latency = 1, .policy = ArbitrationPolicy::kRoundRobin, .masters = 2};
  for (int i = 0; i < 10; ++i) {
    s.requests.push_back(rd(0, 0));
    s.requests.push_back(rd(1, 0));
  }
  both(s);
  const auto r = ref::production_run(s);
  std::vector<std::pair<Cycle, std::uint32_t>> grants;
  for (const auto& e : r.events) {
    if (e.kind == ref::Ev::kGrant) grants.emplace_back(e.cycle, e.master);
  }
  ASSERT_EQ(grants.size(), 20u);
  for (std::size_t i = 0; i < grants.size(); ++i) EXPECT_EQ(grants[i].second, i % 2) << i;
  // Within 20 cycles the bus hands out grants at 0, 2, 4, ...
  EXPECT_EQ(grants[9].first, 18u);
}

TEST(AhbBus, BurstBeats) {
  Scenario s{.first_latency = 2, .masters = 1, .requests = {wr(0, 0, 64)}};
  const auto r = both(s);
  EXPECT_EQ(r.timing[0].complete, 18u);
  EXPECT_EQ(std::count_if(r.events.begin(), r.events.end(),
                          [](const ref::Event& e) { return e.kind == ref::Ev::kBeat; }),
            16);
}

TEST(AxiBus, OverlapTwoMasters) {
  Scenario s{.axi = true, .first_latency = 2, .max_outstanding = 4, .masters = 2,
             .requests = {rd(0, 0), rd(1, 0)}};
  const auto r = both(s);
  EXPECT_EQ(r.timing[0].grant, 0u);
  EXPECT_EQ(r.timing[1].grant, 1u);
  EXPECT_EQ(r.timing[0].complete, 2u);
  EXPECT_EQ(r.timing[1].complete, 3u);
  EXPECT_EQ(makespan(r), 4u);
}

TEST(AxiBus, OutstandingCap) {
  Scenario s{.axi = true, .first_latency = 2, .max_outstanding = 1, .masters = 1,
             .requests = {rd(0, 0), rd(0, 0)}};
  const auto r = both(s);
  EXPECT_EQ(r.timing[1].grant, 2u);
  EXPECT_EQ(r.timing[1].complete, 4u);
  EXPECT_EQ(makespan(r), 5u);
}

TEST(AxiBus, IndependentChannels) {
  Scenario s{.axi = true, .first_latency = 2, .max_outstanding = 1, .masters = 1,
             .requests = {rd(0, 0), wr(0, 0)}};
  const auto r = both(s);
  EXPECT_EQ(r.timing[0].grant, 0u);
  EXPECT_EQ(r.timing[1].grant, 0u);
  EXPECT_EQ(r.timing[0].complete, 2u);
  EXPECT_EQ(r.timing[1].complete, 2u);
}

TEST(AxiBus, BeatsStallBehindEarlierBurst) {
  Scenario s{.axi = true, .first_latency = 1, .max_outstanding = 2, .masters = 2,
             .requests = {rd(0, 0, 16), rd(1, 0)}};
  const auto r = both(s);
  EXPECT_EQ(r.timing[0].complete, 4u);  // beats 1..4
  EXPECT_EQ(r.timing[1].complete, 5u);  // ready at 2, waits for the channel
}

TEST(Interconnect, SubmitBeatsAndIds) {
  AhbBus bus("b", TargetModel{1}, ArbitrationPolicy::kFixedPriority);
  bus.register_master(3);
  EXPECT_EQ(bus.submit(3, TxnKind::kRead, 0, 4, 0), 0u);
  EXPECT_EQ(bus.submit(3, TxnKind::kRead, 0, 64, 0), 1u);
  EXPECT_EQ(bus.submit(3, TxnKind::kRead, 0, 5, 0), 2u);
  EXPECT_THROW(bus.submit(7, TxnKind::kRead, 0, 4, 0), UnknownMaster);
  std::vector<std::uint32_t> beats;
  for (Cycle t = 0; !bus.idle(); ++t) {
    for (const auto& tx : bus.step(t)) beats.push_back(tx.beats);
  }
  EXPECT_EQ(beats, (std::vector<std::uint32_t>{1, 16, 2}));
  EXPECT_EQ(beats_for(4), 1u);
  EXPECT_EQ(beats_for(64), 16u);
  EXPECT_EQ(beats_for(5), 2u);
}

TEST(Interconnect, TraceCsv) {
  AhbBus bus("ahb0", TargetModel{1}, ArbitrationPolicy::kFixedPriority);
  RecordingSink sink;
  bus.set_trace(&sink);
  bus.register_master(0);
  bus.submit(0, TxnKind::kWrite, 0, 4, 0);
  for (Cycle t = 0; !bus.idle(); ++t) bus.step(t);
  EXPECT_EQ(sink.bus_csv(),
            "cycle,bus,event,master_id,txn_id\n"
            "0,ahb0,REQ,0,0\n0,ahb0,GRANT,0,0\n1,ahb0,BEAT,0,0\n2,ahb0,COMPLETE,0,0\n");
}

class OracleEquivalence : public ::testing::TestWithParam<bool> {};

TEST_P(OracleEquivalence, RandomScenarios) {
  std::mt19937_64 rng(GetParam() ? 0xA71u : 0xA4Bu);
  for (int i = 0; i < 300; ++i) {
    const Scenario s = ref::random_scenario(rng, GetParam());
    const auto expect = ref::reference_run(s);
    const auto got = ref::production_run(s);
    ASSERT_EQ(got.timing, expect.timing) << s.describe();
    ASSERT_EQ(got.events, expect.events) << s.describe();
    ASSERT_EQ(got.busy_cycles, expect.busy_cycles) << s.describe();
  }
}

INSTANTIATE_TEST_SUITE_P(Models, OracleEquivalence, ::testing::Values(false, true),
                         [](const auto& info) { return info.param ? "Axi" : "Ahb"; });

TEST(AhbProperties, ConservationAndNoOverlap) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Scenario s = ref::random_scenario(rng, false);
    const auto r = ref::production_run(s);
    Cycle sum = 0;
    std::vector<std::pair<Cycle, Cycle>> spans;
    for (std::size_t k = 0; k < s.requests.size(); ++k) {
      const Cycle hold = s.first_latency + beats_for(s.requests[k].size_bytes);
      sum += hold;
      EXPECT_EQ(r.timing[k].complete - r.timing[k].grant, hold);
      EXPECT_LE(s.requests[k].request, r.timing[k].grant);
      spans.emplace_back(r.timing[k].grant, r.timing[k].complete);
    }
    EXPECT_EQ(r.busy_cycles, sum) << s.describe();
    std::sort(spans.begin(), spans.end());
    for (std::size_t k = 1; k < spans.size(); ++k) EXPECT_LE(spans[k - 1].second, spans[k].first);
  }
}

TEST(AhbProperties, WorkConservingAndRoundRobinBound) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    Scenario s = ref::random_scenario(rng, false);
    const auto r = ref::production_run(s);
    // Whenever a request waits, the bus is busy with someone else.
    for (std::size_t k = 0; k < s.requests.size(); ++k) {
      for (Cycle t = s.requests[k].request; t < r.timing[k].grant; ++t) {
        const bool busy = std::any_of(r.timing.begin(), r.timing.end(), [&](const ref::Timing& o) {
          return o.grant <= t && t < o.complete;
        });
        ASSERT_TRUE(busy) << s.describe();
      }
    }
    if (s.policy != ArbitrationPolicy::kRoundRobin) continue;
    // A FIFO head that is waiting is passed over at most n-1 times.
    for (std::size_t k = 0; k < s.requests.size(); ++k) {
      const std::uint32_t m = s.requests[k].master;
      Cycle head_since = s.requests[k].request;
      for (std::size_t j = 0; j < s.requests.size(); ++j) {
        if (s.requests[j].master == m && j != k && r.timing[j].grant < r.timing[k].grant) {
          head_since = std::max(head_since, r.timing[j].grant);
        }
      }
      int others = 0;
      for (std::size_t j = 0; j < s.requests.size(); ++j) {
        if (s.requests[j].master != m && r.timing[j].grant > head_since &&
            r.timing[j].grant < r.timing[k].grant) {
          ++others;
        }
      }
      EXPECT_LE(others, static_cast<int>(s.masters) - 1) << s.describe();
    }
  }
}

TEST(AhbProperties, SoleMasterLatencyIsOccupancy) {
  for (Cycle L = 1; L <= 4; ++L) {
    for (std::uint32_t size : {1u, 4u, 5u, 64u, 8192u}) {
      Scenario s{.first_latency = L, .masters = 1, .requests = {rd(0, 3, size)}};
      const auto r = ref::production_run(s);
      EXPECT_EQ(r.timing[0].complete - 3, L + beats_for(size));
    }
  }
}

TEST(AxiProperties, CapAndOrdering) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const Scenario s = ref::random_scenario(rng, true);
    const auto r = ref::production_run(s);
    for (std::uint32_t m = 0; m < s.masters; ++m) {
      for (auto kind : {TxnKind::kRead, TxnKind::kWrite}) {
        std::vector<std::size_t> ids;
        for (std::size_t k = 0; k < s.requests.size(); ++k) {
          if (s.requests[k].master == m && s.requests[k].kind == kind) ids.push_back(k);
        }
        std::sort(ids.begin(), ids.end(),
                  [&](auto a, auto b) { return r.timing[a].grant < r.timing[b].grant; });
        for (std::size_t k = 1; k < ids.size(); ++k) {
          EXPECT_LT(r.timing[ids[k - 1]].complete, r.timing[ids[k]].complete);
        }
        // In-flight count never exceeds the cap.
        for (const auto& a : ids) {
          const Cycle t = r.timing[a].grant;
          const auto live = std::count_if(ids.begin(), ids.end(), [&](auto b) {
            return r.timing[b].grant <= t && t < r.timing[b].complete;
          });
          EXPECT_LE(live, static_cast<long>(s.max_outstanding)) << s.describe();
        }
      }
    }
  }
}

}  // namespace
}  // namespace tisim
