// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "tisim/simulation.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <random>

#include "tisim/pattern.hpp"

namespace tisim {

namespace {

class Agent {
 public:
  Agent(MasterId id, std::string name, MasterRole role, Interconnect& bus)
      : id_(id), name_(std::move(name)), role_(role), bus_(&bus) {}
  virtual ~Agent() = default;

  virtual void on_complete(const Transaction& t, Cycle now) = 0;
  virtual void step(Cycle now) = 0;
  virtual bool finished() const = 0;

  MasterId id() const { return id_; }
  const std::string& name() const { return name_; }
  MasterRole role() const { return role_; }

 protected:
  MasterId id_;
  std::string name_;
  MasterRole role_;
  Interconnect* bus_;
};

std::uint64_t name_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

class VictimAgent final : public Agent {
 public:
  VictimAgent(MasterId id, const MasterSpec& spec, Interconnect& bus, std::uint64_t seed)
      : Agent(id, spec.name, MasterRole::kVictim, bus), spec_(spec.victim) {
    // Keyed by name so the jitter stream does not depend on which other
    // masters exist.
    const std::uint64_t h = name_hash(spec.name);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    rng_.seed(seq);
    next_due_ = spec_.start + draw_jitter();
  }

  void on_complete(const Transaction&, Cycle) override {
    outstanding_ = false;
    ++completed_;
  }

  void step(Cycle now) override {
    if (outstanding_ || issued_ >= spec_.count || now < next_due_) return;
    bus_->submit(id_, spec_.kind, spec_.address, spec_.size_bytes, now);
    outstanding_ = true;
    ++issued_;
    next_due_ = spec_.start + issued_ * spec_.period + draw_jitter();
  }

  bool finished() const override { return completed_ >= spec_.count; }

 private:
  Cycle draw_jitter() {
    return spec_.jitter == 0 ? 0 : rng_() % (spec_.jitter + 1);
  }

  VictimSpec spec_;
  std::mt19937_64 rng_;
  std::uint64_t issued_ = 0;
  std::uint64_t completed_ = 0;
  bool outstanding_ = false;
  Cycle next_due_ = 0;
};

class InjectorAgent final : public Agent, public BusPort {
 public:
  InjectorAgent(MasterId id, std::string name, Interconnect& bus)
      : Agent(id, std::move(name), MasterRole::kInjector, bus), core_(id) {}

  TxnId submit(TxnKind kind, std::uint32_t address, std::uint32_t size_bytes,
               Cycle now) override {
    return bus_->submit(id_, kind, address, size_bytes, now);
  }

  void on_complete(const Transaction& t, Cycle now) override { core_.on_complete(t.id, now); }
  void step(Cycle now) override { core_.step(now, *this); }

  bool finished() const override {
    if (!programmed_) return false;
    return core_.error() || core_.done() || core_.loop_enabled() ||
           (!core_.enabled() && !core_.running());
  }

  Injector& core() { return core_; }
  void mark_programmed() { programmed_ = true; }

 private:
  Injector core_;
  bool programmed_ = false;
};

// Replays a configuration write sequence as data-bus writes, one at a time,
// landing each in the injector when its bus transfer completes.
class ProgrammerAgent final : public Agent {
 public:
  ProgrammerAgent(MasterId id, std::string name, Interconnect& bus, InjectorAgent& target,
                  ApbWriteSequence writes, std::uint32_t base, Cycle start)
      : Agent(id, std::move(name), MasterRole::kProgrammer, bus),
        target_(&target),
        writes_(std::move(writes)),
        base_(base),
        start_(start) {
    if (writes_.empty()) target_->mark_programmed();
  }

  void on_complete(const Transaction&, Cycle) override {
    const ApbWrite& w = writes_[next_];
    target_->core().apb_write(w.offset, w.value);
    outstanding_ = false;
    if (++next_ == writes_.size()) target_->mark_programmed();
  }

  void step(Cycle now) override {
    if (outstanding_ || next_ >= writes_.size() || now < start_) return;
    bus_->submit(id_, TxnKind::kWrite, base_ + writes_[next_].offset, 4, now);
    outstanding_ = true;
  }

  bool finished() const override { return next_ >= writes_.size(); }

 private:
  InjectorAgent* target_;
  ApbWriteSequence writes_;
  std::size_t next_ = 0;
  std::uint32_t base_;
  Cycle start_;
  bool outstanding_ = false;
};

struct ApbAction {
  InjectorAgent* target = nullptr;
  bool write = true;
  std::uint32_t offset = 0;
  std::uint32_t value = 0;
  bool completes_programming = false;
};

}  // namespace

struct Simulation::Impl {
  Topology topology;
  std::uint64_t hash = 0;
  std::map<std::string, std::unique_ptr<Interconnect>, std::less<>> buses;
  std::vector<Interconnect*> bus_order;
  std::vector<std::unique_ptr<Agent>> agents;  // indexed by master id
  std::map<std::string, InjectorAgent*, std::less<>> injectors;
  std::multimap<Cycle, ApbAction> schedule;
  MetricsCollector metrics;
  std::vector<Transaction> scratch;
  Cycle now = 0;

  void apply_schedule(Cycle cycle) {
    auto end = schedule.upper_bound(cycle);
    for (auto it = schedule.begin(); it != end; ++it) {
      const ApbAction& a = it->second;
      if (a.write) {
        a.target->core().apb_write(a.offset, a.value);
      } else {
        (void)a.target->core().apb_read(a.offset);
      }
      if (a.completes_programming) a.target->mark_programmed();
    }
    schedule.erase(schedule.begin(), end);
  }

  bool all_finished() const {
    for (const auto& a : agents) {
      if (!a->finished()) return false;
    }
    return true;
  }

  InjectorAgent& find_injector(std::string_view name) {
    auto it = injectors.find(name);
    if (it == injectors.end()) throw UnknownMaster("no injector named '" + std::string(name) + "'");
    return *it->second;
  }
};

Simulation::Simulation(const Topology& topology) : impl_(std::make_unique<Impl>()) {
  validate_topology(topology);
  Impl& s = *impl_;
  s.topology = topology;
  s.hash = tisim::topology_hash(topology);

  for (const BusSpec& b : topology.buses) {
    std::unique_ptr<Interconnect> bus;
    const TargetModel target{b.first_latency};
    if (b.kind == BusKind::kAhb) {
      bus = std::make_unique<AhbBus>(b.name, target, b.policy);
    } else {
      bus = std::make_unique<AxiBus>(b.name, target, b.policy, b.max_outstanding);
    }
    s.bus_order.push_back(bus.get());
    s.buses.emplace(b.name, std::move(bus));
  }

  for (std::size_t i = 0; i < topology.masters.size(); ++i) {
    const MasterSpec& m = topology.masters[i];
    const std::string path = "masters[" + std::to_string(i) + "]";
    Interconnect& bus = *s.buses.at(m.bus);

    if (m.role == MasterRole::kVictim) {
      const auto id = static_cast<MasterId>(s.agents.size());
      bus.register_master(id);
      s.agents.push_back(std::make_unique<VictimAgent>(id, m, bus, topology.seed));
      continue;
    }

    const InjectorSpec& spec = m.injector;
    ApbWriteSequence writes;
    try {
      writes = emit_apb_sequence(lower(parse_pattern(spec.pattern)), spec.ctrl);
    } catch (const SyntaxError& e) {
      throw ConfigError(path + ".injector.pattern", e.what());
    } catch (const RangeError& e) {
      throw ConfigError(path + ".injector.pattern", e.what());
    } catch (const CapacityExceeded& e) {
      throw CapacityExceeded("injector '" + m.name + "': " + e.what());
    }
    if (!spec.enabled) writes.pop_back();  // keep the buffer, skip CTRL.EN

    MasterId programmer_id = 0;
    if (topology.program_via == ProgramPath::kDataBus) {
      programmer_id = static_cast<MasterId>(s.agents.size());
      bus.register_master(programmer_id);
      s.agents.emplace_back();  // filled once the injector exists
    }
    const auto id = static_cast<MasterId>(s.agents.size());
    bus.register_master(id);
    auto inj = std::make_unique<InjectorAgent>(id, m.name, bus);
    InjectorAgent* inj_ptr = inj.get();
    s.agents.push_back(std::move(inj));
    s.injectors.emplace(m.name, inj_ptr);

    if (topology.program_via == ProgramPath::kDataBus) {
      auto prog = std::make_unique<ProgrammerAgent>(programmer_id, m.name + ".cfg", bus, *inj_ptr,
                                                    std::move(writes), spec.config_base,
                                                    topology.program_at);
      s.agents[programmer_id] = std::move(prog);
    } else if (writes.empty()) {
      inj_ptr->mark_programmed();
    } else {
      for (std::size_t k = 0; k < writes.size(); ++k) {
        s.schedule.emplace(topology.program_at,
                           ApbAction{inj_ptr, true, writes[k].offset, writes[k].value,
                                     k + 1 == writes.size()});
      }
    }
  }

  for (const auto& a : s.agents) s.metrics.add_master(a->id(), a->name(), a->role());
}

Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

void Simulation::schedule_apb_write(Cycle at, std::string_view injector, std::uint32_t offset,
                                    std::uint32_t value) {
  impl_->schedule.emplace(at, ApbAction{&impl_->find_injector(injector), true, offset, value, false});
}

void Simulation::schedule_apb_read(Cycle at, std::string_view injector, std::uint32_t offset) {
  impl_->schedule.emplace(at, ApbAction{&impl_->find_injector(injector), false, offset, 0, false});
}

void Simulation::set_trace(TraceSink* sink) {
  for (Interconnect* b : impl_->bus_order) b->set_trace(sink);
  for (auto& [_, inj] : impl_->injectors) inj->core().set_trace(sink);
}

MetricsRecord Simulation::run(Cycle max_cycles, std::string scenario) {
  Impl& s = *impl_;
  auto finish = [&](Cycle cycles, bool partial) {
    MetricsRecord rec = s.metrics.finish(scenario);
    rec.topology_hash = s.hash;
    rec.seed = s.topology.seed;
    rec.cycles = cycles;
    rec.partial = partial;
    return rec;
  };

  for (; s.now < max_cycles; ++s.now) {
    const Cycle now = s.now;
    if (!s.schedule.empty() && s.schedule.begin()->first <= now) s.apply_schedule(now);
    for (Interconnect* bus : s.bus_order) {
      s.scratch.clear();
      bus->collect(now, s.scratch);
      for (const Transaction& t : s.scratch) {
        s.metrics.record(t);
        s.agents[t.master]->on_complete(t, now);
      }
    }
    for (auto& a : s.agents) a->step(now);
    for (Interconnect* bus : s.bus_order) bus->arbitrate(now);
    if (s.all_finished()) {
      MetricsRecord rec = finish(now, false);
      ++s.now;
      return rec;
    }
  }
  throw CycleLimitExceeded(max_cycles, {finish(max_cycles, true)});
}

Injector& Simulation::injector(std::string_view name) {
  return impl_->find_injector(name).core();
}

const Interconnect& Simulation::bus(std::string_view name) const {
  auto it = impl_->buses.find(name);
  if (it == impl_->buses.end()) throw Error("no bus named '" + std::string(name) + "'");
  return *it->second;
}

std::uint64_t Simulation::topology_hash() const { return impl_->hash; }

MetricsRecord run(Simulation& sim, Cycle max_cycles) { return sim.run(max_cycles); }

namespace {

struct Outcome {
  MetricsRecord record;
  bool limit_hit = false;
};

Outcome run_capturing(Simulation& sim, Cycle max_cycles, const std::string& scenario) {
  try {
    return {sim.run(max_cycles, scenario), false};
  } catch (const CycleLimitExceeded& e) {
    return {e.partial().front(), true};
  }
}

}  // namespace

PairResult run_pair(const Topology& t) {
  const bool has_victim = std::any_of(t.masters.begin(), t.masters.end(), [](const MasterSpec& m) {
    return m.role == MasterRole::kVictim;
  });
  const bool has_injector = std::any_of(t.masters.begin(), t.masters.end(), [](const MasterSpec& m) {
    return m.role == MasterRole::kInjector;
  });
  if (!has_victim) throw ConfigError("masters", "a paired run needs at least one victim");
  if (!has_injector) throw ConfigError("masters", "a paired run needs at least one injector");

  // Elaborate both up front so configuration errors surface before running.
  Simulation baseline_sim(without_injectors(t));
  Simulation contended_sim(t);

  auto baseline_future = std::async(std::launch::async, [&] {
    return run_capturing(baseline_sim, t.max_cycles, "baseline");
  });
  Outcome contended = run_capturing(contended_sim, t.max_cycles, "contended");
  Outcome baseline = baseline_future.get();

  PairResult out;
  for (auto& m : contended.record.masters) {
    if (m.role != MasterRole::kVictim) continue;
    const MasterMetrics* b = baseline.record.find(m.name);
    if (b && b->completion_cycle && m.completion_cycle && *b->completion_cycle > 0) {
      const double ratio = static_cast<double>(*m.completion_cycle) /
                           static_cast<double>(*b->completion_cycle);
      m.slowdown = ratio;
      out.slowdown[m.name] = ratio;
    }
  }
  out.baseline = std::move(baseline.record);
  out.contended = std::move(contended.record);
  if (baseline.limit_hit || contended.limit_hit) {
    throw CycleLimitExceeded(t.max_cycles, {out.baseline, out.contended});
  }
  return out;
}

}  // namespace tisim
