// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <thread>

#include "reference_sim.hpp"
#include "topology_gen.hpp"
#include "tisim/errors.hpp"
#include "tisim/registers.hpp"
#include "tisim/simulation.hpp"
#include "tisim/trace.hpp"

namespace tisim {
namespace {

BusSpec ahb(const std::string& name, Cycle L, ArbitrationPolicy p = ArbitrationPolicy::kFixedPriority) {
  BusSpec b;
  b.name = name;
  b.first_latency = L;
  b.policy = p;
  return b;
}

MasterSpec victim(const std::string& name, const std::string& bus, Cycle period,
                  std::uint64_t count) {
  MasterSpec m;
  m.name = name;
  m.bus = bus;
  m.role = MasterRole::kVictim;
  m.victim.period = period;
  m.victim.count = count;
  m.victim.address = 0x80000000u;
  return m;
}

MasterSpec injector(const std::string& name, const std::string& bus, std::string pattern,
                    bool loop = false) {
  MasterSpec m;
  m.name = name;
  m.bus = bus;
  m.role = MasterRole::kInjector;
  m.injector.pattern = std::move(pattern);
  m.injector.ctrl.loop = loop;
  return m;
}

Cycle completion(const MetricsRecord& r, const std::string& name) {
  const auto* m = r.find(name);
  EXPECT_NE(m, nullptr) << name;
  return m && m->completion_cycle ? *m->completion_cycle : 0;
}

TEST(Harness, VictimAlone) {
  Topology t;
  t.buses = {ahb("b", 2)};
  t.masters = {victim("cpu", "b", 4, 10)};
  Simulation sim(t);
  const auto rec = run(sim, 1000);
  EXPECT_EQ(completion(rec, "cpu"), 39u);
  EXPECT_EQ(rec.find("cpu")->txn_count, 10u);
  EXPECT_EQ(*rec.find("cpu")->max_latency, 3u);
  EXPECT_EQ(rec.cycles, 39u);
  EXPECT_FALSE(rec.partial);

  // The same request stream through the brute-force bus oracle.
  ref::Scenario s{.first_latency = 2, .masters = 1};
  for (Cycle k = 0; k < 10; ++k) s.requests.push_back({0, TxnKind::kRead, 4, 4 * k});
  EXPECT_EQ(ref::reference_run(s).timing.back().complete, 39u);
}

TEST(Harness, LoopInjectorRoundRobin) {
  Topology t;
  t.buses = {ahb("b", 2, ArbitrationPolicy::kRoundRobin)};
  t.masters = {injector("ti", "b", "write 0x1000", true), victim("cpu", "b", 4, 10)};
  Simulation sim(t);
  const auto rec = run(sim, 10000);
  EXPECT_EQ(completion(rec, "cpu"), 57u);
  EXPECT_GT(completion(rec, "cpu"), 39u);
  EXPECT_GT(rec.find("ti")->txn_count, 0u);
}

TEST(Harness, LoopInjectorStarvesAtFixedPriority) {
  Topology t;
  t.buses = {ahb("b", 2)};
  t.masters = {injector("ti", "b", "write 0x1000", true), victim("cpu", "b", 4, 1000)};
  Simulation sim(t);
  try {
    run(sim, 10);
    FAIL();
  } catch (const CycleLimitExceeded& e) {
    EXPECT_EQ(e.limit(), 10u);
    ASSERT_EQ(e.partial().size(), 1u);
    EXPECT_TRUE(e.partial()[0].partial);
    EXPECT_EQ(e.partial()[0].cycles, 10u);
    // The victim's first access beats the injector's fetch and decode.
    EXPECT_EQ(e.partial()[0].find("cpu")->txn_count, 1u);
  }
}

TEST(Harness, CapacityNamesTheInjector) {
  std::string pattern;
  for (int i = 0; i < 129; ++i) pattern += "read 0x0\n";
  Topology t;
  t.buses = {ahb("b", 1)};
  t.masters = {victim("cpu", "b", 1, 1), injector("big_one", "b", pattern)};
  try {
    Simulation sim(t);
    FAIL();
  } catch (const CapacityExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("big_one"), std::string::npos);
  }
  pattern.resize(pattern.size() - 9);
  t.masters[1].injector.pattern = pattern;
  EXPECT_NO_THROW(Simulation{t});
}

TEST(Harness, BadPatternIsConfigError) {
  Topology t;
  t.buses = {ahb("b", 1)};
  t.masters = {victim("cpu", "b", 1, 1), injector("ti", "b", "read 0x0\nread size=4")};
  try {
    Simulation sim(t);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "masters[1].injector.pattern");
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Harness, SeleneLikeBuildsAndRuns) {
  const Topology t = load_topology(TISIM_SOURCE_DIR "/scenarios/selene-like.cfg");
  Simulation sim(t);
  EXPECT_NO_THROW(sim.bus("ahb"));
  EXPECT_NO_THROW(sim.bus("axi"));
  EXPECT_NO_THROW(sim.injector("ti0"));
  EXPECT_NO_THROW(sim.injector("ti1"));
  const auto pair = run_pair(t);
  EXPECT_EQ(pair.slowdown.size(), 2u);
  for (const auto& [name, s] : pair.slowdown) EXPECT_GT(s, 1.0) << name;
  const std::vector<MetricsRecord> recs = {pair.baseline, pair.contended};
  const auto csv = emit_csv(recs);
  EXPECT_NE(csv.find("contended,cpu0,victim"), std::string::npos);
}

TEST(HarnessPair, DisabledInjectorGivesUnitSlowdown) {
  Topology t;
  t.buses = {ahb("b", 2)};
  t.masters = {injector("ti", "b", "write 0x0 size=64 reps=64", true), victim("cpu", "b", 3, 50)};
  t.masters[0].injector.enabled = false;
  const auto r = run_pair(t);
  EXPECT_EQ(r.slowdown.at("cpu"), 1.0);
  EXPECT_EQ(r.contended.find("ti")->txn_count, 0u);
}

TEST(HarnessPair, OtherBusGivesUnitSlowdown) {
  Topology t;
  t.buses = {ahb("a", 2), ahb("b", 2)};
  t.masters = {injector("ti", "a", "write 0x0 size=64 reps=64", true), victim("cpu", "b", 3, 50)};
  EXPECT_EQ(run_pair(t).slowdown.at("cpu"), 1.0);
}

TEST(HarnessPair, SaturatingInjectorSlowsVictim) {
  Topology t;
  t.buses = {ahb("b", 2, ArbitrationPolicy::kRoundRobin)};
  t.masters = {injector("ti", "b", "write 0x0 size=64 reps=64", true), victim("cpu", "b", 3, 50)};
  const auto r = run_pair(t);
  EXPECT_GT(r.slowdown.at("cpu"), 1.0);
  EXPECT_EQ(r.contended.find("cpu")->slowdown, r.slowdown.at("cpu"));
  EXPECT_FALSE(r.baseline.find("cpu")->slowdown.has_value());
}

TEST(HarnessPair, NeedsVictimAndInjector) {
  Topology t;
  t.buses = {ahb("b", 2)};
  t.masters = {victim("cpu", "b", 3, 5)};
  EXPECT_THROW(run_pair(t), ConfigError);
  t.masters = {injector("ti", "b", "read 0x0")};
  EXPECT_THROW(run_pair(t), ConfigError);
}

TEST(HarnessPair, LimitCarriesBothHalves) {
  Topology t;
  t.buses = {ahb("b", 2)};
  t.masters = {injector("ti", "b", "write 0x0", true), victim("cpu", "b", 4, 1000)};
  t.max_cycles = 100;
  try {
    run_pair(t);
    FAIL();
  } catch (const CycleLimitExceeded& e) {
    ASSERT_EQ(e.partial().size(), 2u);
    EXPECT_EQ(e.partial()[0].scenario, "baseline");
    EXPECT_EQ(e.partial()[1].scenario, "contended");
    EXPECT_TRUE(e.partial()[1].partial);
  }
}

TEST(HarnessPair, BaselineMatchesInjectorFreeRun) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const Topology t = gen::random_topology(rng);
    const auto pair = run_pair(t);
    Simulation alone(without_injectors(t));
    const auto rec = alone.run(t.max_cycles, "baseline");
    EXPECT_EQ(pair.baseline, rec);
  }
}

TEST(HarnessPair, Monotonicity) {
  std::mt19937_64 rng(22);
  int strict = 0;
  for (int i = 0; i < 60; ++i) {
    const Topology t = gen::random_topology(rng);
    const auto v = gen::judge(t, run_pair(t));
    EXPECT_TRUE(v.never_faster) << v.detail << canonical_json(t);
    EXPECT_TRUE(v.strict_held) << v.detail << canonical_json(t);
    strict += v.strict_expected;
  }
  EXPECT_GE(strict, 10);
}

TEST(Harness, Deterministic) {
  const Topology t = load_topology(TISIM_SOURCE_DIR "/scenarios/selene-like.cfg");
  const auto a = run_pair(t);
  const auto b = run_pair(t);
  EXPECT_EQ(a.contended, b.contended);
  EXPECT_EQ(a.baseline, b.baseline);
  const std::vector<MetricsRecord> ra = {a.baseline, a.contended};
  const std::vector<MetricsRecord> rb = {b.baseline, b.contended};
  EXPECT_EQ(emit_csv(ra), emit_csv(rb));
  Topology other = t;
  other.seed = 43;
  EXPECT_NE(run_pair(other).contended.find("cpu0")->latencies, a.contended.find("cpu0")->latencies);
}

TEST(Harness, ClosedLoopVictim) {
  Topology t;
  t.buses = {ahb("b", 1, ArbitrationPolicy::kRoundRobin)};
  t.masters = {victim("cpu", "b", 5, 40), injector("ti", "b", "read 0x0 size=32 reps=20\ndelay 7")};
  t.masters[0].victim.start = 3;
  Simulation sim(t);
  const auto rec = sim.run(100000);
  std::vector<Transaction> mine;
  for (const auto& r : rec.transactions) {
    if (r.master == "cpu") mine.push_back(r.txn);
  }
  ASSERT_EQ(mine.size(), 40u);
  for (std::size_t k = 0; k < mine.size(); ++k) {
    const Cycle due = 3 + 5 * k;
    EXPECT_EQ(mine[k].request, k == 0 ? due : std::max(due, mine[k - 1].complete)) << k;
  }
  std::uint64_t total = 0;
  for (const auto& m : rec.masters) total += m.txn_count;
  EXPECT_EQ(total, rec.transactions.size());
}

TEST(Harness, ConfigPortTrafficIsInvisible) {
  Topology t;
  t.buses = {ahb("b", 2)};
  t.masters = {victim("cpu", "b", 3, 200), injector("ti", "b", "read 0x0")};
  t.masters[1].injector.enabled = false;

  auto trace = [&](bool apb) {
    Simulation sim(t);
    RecordingSink sink;
    sim.set_trace(&sink);
    if (apb) {
      std::mt19937_64 rng(9);
      for (int i = 0; i < 1000; ++i) {
        const Cycle at = rng() % 600;
        const auto off = static_cast<std::uint32_t>(regs::kBufferBase + 4 * (rng() % 256));
        if (i % 2) {
          sim.schedule_apb_write(at, "ti", off, static_cast<std::uint32_t>(rng()));
        } else {
          sim.schedule_apb_read(at, "ti", i % 4 ? off : regs::kStatus);
        }
      }
    }
    sim.run(100000);
    return sink.bus_csv();
  };
  const auto quiet = trace(false);
  EXPECT_GT(quiet.size(), 1000u);
  EXPECT_EQ(quiet, trace(true));
}

TEST(Harness, DataBusProgrammingInterferes) {
  Topology t;
  t.buses = {ahb("b", 2, ArbitrationPolicy::kRoundRobin)};
  t.masters = {victim("cpu", "b", 1, 50), injector("ti", "b", "read 0x0\nwrite 0x10\ndelay 5")};
  t.masters[1].injector.enabled = false;
  Simulation apb(t);
  const auto via_port = apb.run(100000);
  t.program_via = ProgramPath::kDataBus;
  Simulation bus(t);
  const auto via_bus = bus.run(100000);
  EXPECT_GT(completion(via_bus, "cpu"), completion(via_port, "cpu"));
  const auto* prog = via_bus.find("ti.cfg");
  ASSERT_NE(prog, nullptr);
  EXPECT_EQ(prog->role, MasterRole::kProgrammer);
  EXPECT_EQ(prog->txn_count, 6u);  // three descriptors, CTRL write skipped
  EXPECT_EQ(bus.injector("ti").apb_read(regs::kBufferBase + 4), 0u);
  EXPECT_EQ(bus.injector("ti").apb_read(regs::kBufferBase + 8),
            apb.injector("ti").apb_read(regs::kBufferBase + 8));
}

TEST(Harness, DataBusProgrammingStartsInjector) {
  Topology t;
  t.buses = {ahb("b", 1)};
  t.masters = {injector("ti", "b", "write 0x40 reps=3")};
  t.program_via = ProgramPath::kDataBus;
  Simulation sim(t);
  const auto rec = sim.run(1000);
  EXPECT_EQ(rec.find("ti.cfg")->txn_count, 3u);
  EXPECT_EQ(rec.find("ti")->txn_count, 3u);
  EXPECT_TRUE(sim.injector("ti").done());
}

TEST(Harness, ProgramAtDelaysInjection) {
  Topology t;
  t.buses = {ahb("b", 1)};
  t.masters = {injector("ti", "b", "write 0x40")};
  t.program_at = 50;
  Simulation sim(t);
  const auto rec = sim.run(1000);
  ASSERT_EQ(rec.transactions.size(), 1u);
  EXPECT_EQ(rec.transactions[0].txn.request, 52u);
  EXPECT_EQ(rec.cycles, 54u);
}

TEST(Harness, UnknownInjectorName) {
  Topology t;
  t.buses = {ahb("b", 1)};
  t.masters = {victim("cpu", "b", 1, 1)};
  Simulation sim(t);
  EXPECT_THROW(sim.schedule_apb_write(0, "cpu", 0, 0), UnknownMaster);
}

TEST(Harness, MovesAcrossThreads) {
  const Topology t = load_topology(TISIM_SOURCE_DIR "/scenarios/selene-like.cfg");
  Simulation here(t);
  const auto expect = Simulation(t).run(t.max_cycles);
  MetricsRecord got;
  std::thread worker([&, sim = std::move(here)]() mutable { got = sim.run(t.max_cycles); });
  worker.join();
  EXPECT_EQ(got, expect);
}

}  // namespace
}  // namespace tisim
