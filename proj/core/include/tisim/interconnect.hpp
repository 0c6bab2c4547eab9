// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_INTERCONNECT_HPP_
#define TISIM_INTERCONNECT_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tisim/trace.hpp"
#include "tisim/types.hpp"

namespace tisim {

enum class ArbitrationPolicy : std::uint8_t { kFixedPriority, kRoundRobin };

std::string_view to_string(ArbitrationPolicy p);

struct Transaction {
  TxnId id = 0;
  MasterId master = 0;
  TxnKind kind = TxnKind::kRead;
  std::uint32_t address = 0;
  std::uint32_t size_bytes = 0;
  std::uint32_t beats = 1;
  Cycle request = 0;
  Cycle grant = 0;
  Cycle complete = 0;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

// Target timing: first_latency cycles before the first beat, then one beat
// per cycle.
struct TargetModel {
  Cycle first_latency = 1;
};

// Chooses among requesting slots. Slots are master positions in ascending
// master-id order; fixed priority favours the lowest slot, round robin starts
// after the most recent grant. Ties always resolve towards the lower slot.
class Arbiter {
 public:
  explicit Arbiter(ArbitrationPolicy policy = ArbitrationPolicy::kFixedPriority)
      : policy_(policy) {}

  void resize(std::size_t slots) { slots_ = slots; }

  template <typename Eligible>
  std::optional<std::size_t> pick(Eligible&& eligible) {
    if (slots_ == 0) return std::nullopt;
    std::size_t start = 0;
    if (policy_ == ArbitrationPolicy::kRoundRobin && last_) {
      start = (*last_ + 1) % slots_;
    }
    for (std::size_t k = 0; k < slots_; ++k) {
      const std::size_t slot = (start + k) % slots_;
      if (eligible(slot)) {
        last_ = slot;
        return slot;
      }
    }
    return std::nullopt;
  }

  ArbitrationPolicy policy() const { return policy_; }

 private:
  ArbitrationPolicy policy_;
  std::size_t slots_ = 0;
  std::optional<std::size_t> last_;
};

// Cycle-level interconnect. Each simulated cycle is driven in two halves:
//
//   collect(now)    retire transactions completing at `now`
//   ...masters observe completions and submit() new requests...
//   arbitrate(now)  grant / accept requests pending at `now`
//
// step(now) runs both halves back to back for callers that submit ahead.
class Interconnect {
 public:
  Interconnect(std::string name, TargetModel target, ArbitrationPolicy policy);
  virtual ~Interconnect() = default;

  Interconnect(const Interconnect&) = delete;
  Interconnect& operator=(const Interconnect&) = delete;

  const std::string& name() const { return name_; }
  const TargetModel& target() const { return target_; }
  ArbitrationPolicy policy() const { return policy_; }

  // Masters must be registered before the first submit().
  void register_master(MasterId id);
  bool has_master(MasterId id) const;
  const std::vector<MasterId>& masters() const { return masters_; }

  // Throws UnknownMaster.
  TxnId submit(MasterId master, TxnKind kind, std::uint32_t address,
               std::uint32_t size_bytes, Cycle now);

  // Appends transactions whose complete cycle is `now` to `out`.
  virtual void collect(Cycle now, std::vector<Transaction>& out) = 0;
  virtual void arbitrate(Cycle now) = 0;
  std::vector<Transaction> step(Cycle now);

  // No request queued and nothing in flight.
  virtual bool idle() const = 0;

  // Cycles during which data or occupancy was charged to the target.
  Cycle busy_cycles() const { return busy_cycles_; }

  void set_trace(TraceSink* sink) { trace_ = sink; }

 protected:
  std::size_t slot_of(MasterId id) const;
  virtual void on_master_added() = 0;
  virtual void enqueue(std::size_t slot, const Transaction& t) = 0;
  void emit(Cycle cycle, BusEventKind kind, const Transaction& t) const;

  std::string name_;
  TargetModel target_;
  ArbitrationPolicy policy_;
  std::vector<MasterId> masters_;  // ascending
  Cycle busy_cycles_ = 0;

 private:
  TraceSink* trace_ = nullptr;
  TxnId next_id_ = 0;
};

// Serialized occupancy bus: a granted transaction holds the bus for
// first_latency + beats cycles, and nothing else overlaps it.
class AhbBus final : public Interconnect {
 public:
  AhbBus(std::string name, TargetModel target, ArbitrationPolicy policy);

  void collect(Cycle now, std::vector<Transaction>& out) override;
  void arbitrate(Cycle now) override;
  bool idle() const override { return !current_ && pending_ == 0; }

 private:
  void on_master_added() override;
  void enqueue(std::size_t slot, const Transaction& t) override;

  Arbiter arbiter_;
  std::vector<std::deque<Transaction>> queues_;
  std::size_t pending_ = 0;
  std::optional<Transaction> current_;
};

// Split read/write interconnect. Each channel accepts at most one address per
// cycle, delivers at most one beat per cycle in acceptance order, and limits
// every master to `max_outstanding` in-flight transactions per channel. A
// transaction completes on the cycle of its last beat.
class AxiBus final : public Interconnect {
 public:
  AxiBus(std::string name, TargetModel target, ArbitrationPolicy policy,
         std::uint32_t max_outstanding);

  void collect(Cycle now, std::vector<Transaction>& out) override;
  void arbitrate(Cycle now) override;
  bool idle() const override;

  std::uint32_t max_outstanding() const { return max_outstanding_; }
  Cycle read_beat_cycles() const { return read_.beat_cycles; }
  Cycle write_beat_cycles() const { return write_.beat_cycles; }

 private:
  struct InFlight {
    Transaction txn;
    Cycle data_start = 0;
  };
  struct Channel {
    Arbiter arbiter;
    std::vector<std::deque<Transaction>> pending;
    std::vector<std::uint32_t> in_flight;
    std::deque<InFlight> accepted;
    std::size_t pending_count = 0;
    Cycle next_free_beat = 0;
    Cycle beat_cycles = 0;
  };

  void on_master_added() override;
  void enqueue(std::size_t slot, const Transaction& t) override;
  void collect_channel(Channel& ch, Cycle now, std::vector<Transaction>& out);
  void arbitrate_channel(Channel& ch, Cycle now);

  std::uint32_t max_outstanding_;
  Channel read_;
  Channel write_;
};

}  // namespace tisim

#endif  // TISIM_INTERCONNECT_HPP_
