// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_TOPOLOGY_HPP_
#define TISIM_TOPOLOGY_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tisim/interconnect.hpp"
#include "tisim/metrics.hpp"
#include "tisim/pattern.hpp"
#include "tisim/types.hpp"

namespace tisim {

enum class BusKind : std::uint8_t { kAhb, kAxi };
std::string_view to_string(BusKind k);

struct BusSpec {
  std::string name;
  BusKind kind = BusKind::kAhb;
  Cycle first_latency = 1;
  ArbitrationPolicy policy = ArbitrationPolicy::kFixedPriority;
  std::uint32_t max_outstanding = 1;  // AXI only
};

// Closed-loop synthetic core: access k is issued at
// max(start + k * period + jitter_k, completion of access k - 1), where
// jitter_k is drawn uniformly from [0, jitter] using the topology seed.
struct VictimSpec {
  Cycle period = 1;
  std::uint64_t count = 1;
  TxnKind kind = TxnKind::kRead;
  std::uint32_t address = 0;
  std::uint32_t size_bytes = 4;
  Cycle start = 0;
  Cycle jitter = 0;
};

struct InjectorSpec {
  std::string pattern;         // DSL source text
  std::string pattern_origin;  // file it came from, empty when inline
  CtrlFlags ctrl{.loop = false, .irq_enable = false, .pipelined = true};
  bool enabled = true;
  // Data-bus address of the register window when programmed over the bus.
  std::uint32_t config_base = 0xFC000000u;
};

struct MasterSpec {
  std::string name;
  std::string bus;
  MasterRole role = MasterRole::kVictim;  // kVictim or kInjector
  VictimSpec victim;
  InjectorSpec injector;
};

enum class ProgramPath : std::uint8_t {
  kConfigPort,  // dedicated register port, no data-bus traffic
  kDataBus,     // descriptor writes travel over the injector's data bus
};

struct Topology {
  std::vector<BusSpec> buses;
  std::vector<MasterSpec> masters;
  std::uint64_t seed = 0;
  Cycle max_cycles = 10'000'000;
  ProgramPath program_via = ProgramPath::kConfigPort;
  Cycle program_at = 0;
};

// JSON document; see docs/config-schema.md. pattern_file entries resolve
// against base_dir. Throws ConfigError naming the offending field.
Topology parse_topology(std::string_view json_text,
                        const std::filesystem::path& base_dir = {});
Topology load_topology(const std::filesystem::path& file);

// Structural checks only (names, references, ranges). Throws ConfigError.
void validate_topology(const Topology& t);

// Stable serialization (pattern text inlined) and its FNV-1a 64 hash.
std::string canonical_json(const Topology& t);
std::uint64_t topology_hash(const Topology& t);

// Copy of `t` with every injector removed.
Topology without_injectors(const Topology& t);

}  // namespace tisim

#endif  // TISIM_TOPOLOGY_HPP_
