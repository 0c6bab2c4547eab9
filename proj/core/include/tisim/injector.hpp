// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_INJECTOR_HPP_
#define TISIM_INJECTOR_HPP_

#include <array>
#include <cstdint>
#include <optional>

#include "tisim/descriptor.hpp"
#include "tisim/registers.hpp"
#include "tisim/trace.hpp"
#include "tisim/types.hpp"

namespace tisim {

// The injector's view of its data interconnect.
class BusPort {
 public:
  virtual ~BusPort() = default;
  virtual TxnId submit(TxnKind kind, std::uint32_t address,
                       std::uint32_t size_bytes, Cycle now) = 0;
};

// Cycle-level traffic injector: a register file and descriptor buffer behind
// a configuration port, and a three-stage fetch / decode / execute engine.
//
// Timing per descriptor: FETCH takes one cycle, DECODE one cycle, then EXEC
// either issues one bus request per repetition (the next repetition goes out
// on the cycle the previous one completes) or counts down delay cycles.
//
// Pipelined mode (CTRL.PIPE_EN=1) fetches and decodes descriptor i+1 while i
// executes, so the next descriptor can issue on the cycle i completes. Legacy
// mode runs one stage at a time and fetches i+1 only once i has completed,
// which leaves a two-cycle gap on the bus between descriptors.
//
// Configuration-port accesses are instantaneous and never touch the data
// interconnect. Register writes made before step(now) are visible to it.
class Injector {
 public:
  explicit Injector(std::uint32_t id = 0);

  std::uint32_t id() const { return id_; }

  // Throws OffsetOutOfRange for offsets at or beyond 0x800.
  void apb_write(std::uint32_t offset, std::uint32_t value);
  std::uint32_t apb_read(std::uint32_t offset) const;

  // Same as writing CTRL.RST.
  void reset();

  // Delivers a completion from the data interconnect. Completions of
  // transactions the engine no longer waits for are ignored.
  void on_complete(TxnId txn, Cycle now);

  // Advances the engine by one cycle. Call once per cycle with increasing
  // `now`, after this cycle's completions have been delivered.
  void step(Cycle now, BusPort& port);

  bool running() const { return running_; }
  bool done() const { return done_; }
  bool error() const { return error_; }
  bool loop_enabled() const { return (ctrl_ & regs::ctrl::kLoop) != 0; }
  bool enabled() const { return (ctrl_ & regs::ctrl::kEnable) != 0; }
  bool pipelined() const { return pipelined_; }
  std::uint32_t completed_descriptors() const { return completed_; }

  void set_trace(TraceSink* sink) { trace_ = sink; }

 private:
  struct Latch {
    bool valid = false;
    std::uint32_t index = 0;
    DescriptorWords words;
    Descriptor desc;
  };
  struct Exec {
    bool active = false;
    std::uint32_t index = 0;
    Descriptor desc;
    std::uint32_t rep = 0;
    std::uint32_t address = 0;
    Cycle delay_end = 0;
    std::optional<TxnId> txn;
    bool txn_done = false;
  };

  void start_engine();
  void clear_engine();
  void halt_with_error(Cycle now, std::uint32_t index);
  // Returns true if EXEC finished its descriptor this cycle.
  bool advance_exec(Cycle now, BusPort& port);
  void begin_exec(const Latch& from, Cycle now, BusPort& port);
  void issue(Cycle now, BusPort& port);
  void finish_descriptor(Cycle now);
  bool decode_latch(Cycle now);
  bool fetch(Cycle now);
  regs::FsmCode fsm_code() const;
  void trace(Cycle now, Stage stage, StageEventKind ev, std::uint32_t index) const;

  std::uint32_t id_;
  std::array<std::uint32_t, regs::kBufferWords> buffer_{};
  std::uint32_t ctrl_ = regs::ctrl::kResetValue;
  std::uint32_t err_info_ = 0;
  std::uint32_t completed_ = 0;
  bool irq_pending_ = false;

  bool start_pending_ = false;
  bool running_ = false;
  bool done_ = false;
  bool error_ = false;
  bool pipelined_ = true;

  Latch fetched_;
  Latch decoded_;
  Exec exec_;
  std::uint32_t next_fetch_ = 0;
  bool fetch_stopped_ = false;

  TraceSink* trace_ = nullptr;
};

}  // namespace tisim

#endif  // TISIM_INJECTOR_HPP_
