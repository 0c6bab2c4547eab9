// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_SIMULATION_HPP_
#define TISIM_SIMULATION_HPP_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tisim/errors.hpp"
#include "tisim/injector.hpp"
#include "tisim/interconnect.hpp"
#include "tisim/metrics.hpp"
#include "tisim/topology.hpp"
#include "tisim/trace.hpp"

namespace tisim {

// Thrown when a run reaches its cycle cap; carries what was measured.
class CycleLimitExceeded : public Error {
 public:
  CycleLimitExceeded(Cycle limit, std::vector<MetricsRecord> partial)
      : Error("cycle limit of " + std::to_string(limit) + " reached"),
        limit_(limit),
        partial_(std::move(partial)) {}
  Cycle limit() const { return limit_; }
  const std::vector<MetricsRecord>& partial() const { return partial_; }

 private:
  Cycle limit_;
  std::vector<MetricsRecord> partial_;
};

// One elaborated SoC: buses, victims, injectors and, for data-bus
// programming, one programming master per injector placed just ahead of it.
// Master ids follow topology order.
//
// Each cycle runs: scheduled configuration-port accesses, bus completions,
// master steps (in id order), then bus arbitration.
class Simulation {
 public:
  // Throws ConfigError, or CapacityExceeded naming the injector.
  explicit Simulation(const Topology& topology);
  ~Simulation();
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  // Configuration-port accesses applied at the start of cycle `at`. They
  // never block termination. Throws UnknownMaster for a bad injector name.
  void schedule_apb_write(Cycle at, std::string_view injector, std::uint32_t offset,
                          std::uint32_t value);
  void schedule_apb_read(Cycle at, std::string_view injector, std::uint32_t offset);

  void set_trace(TraceSink* sink);

  // Runs until every victim, programmer and non-LOOP injector has finished.
  // Throws CycleLimitExceeded if that has not happened after `max_cycles`
  // cycles (0 .. max_cycles-1).
  MetricsRecord run(Cycle max_cycles, std::string scenario = "run");

  Injector& injector(std::string_view name);
  const Interconnect& bus(std::string_view name) const;
  std::uint64_t topology_hash() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

inline Simulation build(const Topology& t) { return Simulation(t); }
MetricsRecord run(Simulation& sim, Cycle max_cycles);

struct PairResult {
  MetricsRecord baseline;
  MetricsRecord contended;
  std::map<std::string, double> slowdown;  // per victim
};

// Baseline is `t` without injectors; contended is `t` as given. Both run
// with t.max_cycles, concurrently. slowdown = contended / baseline victim
// completion cycle, also stored on the contended victims.
PairResult run_pair(const Topology& t);

}  // namespace tisim

#endif  // TISIM_SIMULATION_HPP_
