// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "tisim/interconnect.hpp"

#include <algorithm>

#include "tisim/errors.hpp"

namespace tisim {

std::string_view to_string(ArbitrationPolicy p) {
  return p == ArbitrationPolicy::kRoundRobin ? "round_robin" : "fixed_priority";
}

Interconnect::Interconnect(std::string name, TargetModel target,
                           ArbitrationPolicy policy)
    : name_(std::move(name)), target_(target), policy_(policy) {
  if (target_.first_latency < 1) {
    throw Error("bus " + name_ + ": first latency must be at least 1");
  }
}

void Interconnect::register_master(MasterId id) {
  auto it = std::lower_bound(masters_.begin(), masters_.end(), id);
  if (it != masters_.end() && *it == id) return;
  masters_.insert(it, id);
  on_master_added();
}

bool Interconnect::has_master(MasterId id) const {
  return std::binary_search(masters_.begin(), masters_.end(), id);
}

std::size_t Interconnect::slot_of(MasterId id) const {
  auto it = std::lower_bound(masters_.begin(), masters_.end(), id);
  if (it == masters_.end() || *it != id) {
    throw UnknownMaster("master " + std::to_string(id) +
                        " is not registered on bus " + name_);
  }
  return static_cast<std::size_t>(it - masters_.begin());
}

TxnId Interconnect::submit(MasterId master, TxnKind kind, std::uint32_t address,
                           std::uint32_t size_bytes, Cycle now) {
  const std::size_t slot = slot_of(master);
  Transaction t;
  t.id = next_id_++;
  t.master = master;
  t.kind = kind;
  t.address = address;
  t.size_bytes = size_bytes;
  t.beats = beats_for(size_bytes);
  t.request = now;
  emit(now, BusEventKind::kReq, t);
  enqueue(slot, t);
  return t.id;
}

std::vector<Transaction> Interconnect::step(Cycle now) {
  std::vector<Transaction> done;
  collect(now, done);
  arbitrate(now);
  return done;
}

void Interconnect::emit(Cycle cycle, BusEventKind kind, const Transaction& t) const {
  if (trace_) trace_->on_bus({cycle, name_, kind, t.master, t.id});
}

// --- AHB -------------------------------------------------------------------

AhbBus::AhbBus(std::string name, TargetModel target, ArbitrationPolicy policy)
    : Interconnect(std::move(name), target, policy), arbiter_(policy) {}

void AhbBus::on_master_added() {
  // Slots shift when a lower id is inserted; only legal before traffic.
  if (pending_ != 0 || current_) {
    throw Error("bus " + name_ + ": masters must be registered before traffic");
  }
  queues_.resize(masters_.size());
  arbiter_.resize(masters_.size());
}

void AhbBus::enqueue(std::size_t slot, const Transaction& t) {
  queues_[slot].push_back(t);
  ++pending_;
}

void AhbBus::collect(Cycle now, std::vector<Transaction>& out) {
  if (!current_) return;
  const Cycle first_beat = current_->grant + target_.first_latency;
  if (now >= first_beat && now < current_->complete) {
    emit(now, BusEventKind::kBeat, *current_);
  }
  if (current_->complete == now) {
    emit(now, BusEventKind::kComplete, *current_);
    out.push_back(*current_);
    current_.reset();
  }
}

void AhbBus::arbitrate(Cycle now) {
  if (!current_ && pending_ > 0) {
    auto slot = arbiter_.pick([&](std::size_t s) {
      return !queues_[s].empty() && queues_[s].front().request <= now;
    });
    if (slot) {
      Transaction t = queues_[*slot].front();
      queues_[*slot].pop_front();
      --pending_;
      t.grant = now;
      t.complete = now + target_.first_latency + t.beats;
      emit(now, BusEventKind::kGrant, t);
      current_ = t;
    }
  }
  if (current_) ++busy_cycles_;
}

// --- AXI -------------------------------------------------------------------

AxiBus::AxiBus(std::string name, TargetModel target, ArbitrationPolicy policy,
               std::uint32_t max_outstanding)
    : Interconnect(std::move(name), target, policy),
      max_outstanding_(max_outstanding) {
  if (max_outstanding_ < 1) {
    throw Error("bus " + name_ + ": outstanding limit must be at least 1");
  }
  read_.arbiter = Arbiter(policy);
  write_.arbiter = Arbiter(policy);
}

void AxiBus::on_master_added() {
  for (Channel* ch : {&read_, &write_}) {
    if (ch->pending_count != 0 || !ch->accepted.empty()) {
      throw Error("bus " + name_ + ": masters must be registered before traffic");
    }
    ch->pending.resize(masters_.size());
    ch->in_flight.resize(masters_.size());
    ch->arbiter.resize(masters_.size());
  }
}

void AxiBus::enqueue(std::size_t slot, const Transaction& t) {
  Channel& ch = t.kind == TxnKind::kRead ? read_ : write_;
  ch.pending[slot].push_back(t);
  ++ch.pending_count;
}

bool AxiBus::idle() const {
  return read_.pending_count == 0 && write_.pending_count == 0 &&
         read_.accepted.empty() && write_.accepted.empty();
}

void AxiBus::collect_channel(Channel& ch, Cycle now, std::vector<Transaction>& out) {
  if (ch.accepted.empty()) return;
  const InFlight& head = ch.accepted.front();
  if (head.data_start <= now) {
    emit(now, BusEventKind::kBeat, head.txn);
    ++ch.beat_cycles;
  }
  if (head.txn.complete == now) {
    emit(now, BusEventKind::kComplete, head.txn);
    out.push_back(head.txn);
    --ch.in_flight[slot_of(head.txn.master)];
    ch.accepted.pop_front();
  }
}

void AxiBus::collect(Cycle now, std::vector<Transaction>& out) {
  collect_channel(read_, now, out);
  collect_channel(write_, now, out);
  busy_cycles_ = read_.beat_cycles + write_.beat_cycles;
}

void AxiBus::arbitrate_channel(Channel& ch, Cycle now) {
  if (ch.pending_count == 0) return;
  auto slot = ch.arbiter.pick([&](std::size_t s) {
    return !ch.pending[s].empty() && ch.pending[s].front().request <= now &&
           ch.in_flight[s] < max_outstanding_;
  });
  if (!slot) return;
  Transaction t = ch.pending[*slot].front();
  ch.pending[*slot].pop_front();
  --ch.pending_count;
  ++ch.in_flight[*slot];
  t.grant = now;
  const Cycle data_start = std::max(now + target_.first_latency, ch.next_free_beat);
  t.complete = data_start + t.beats - 1;
  ch.next_free_beat = t.complete + 1;
  emit(now, BusEventKind::kGrant, t);
  ch.accepted.push_back({t, data_start});
}

void AxiBus::arbitrate(Cycle now) {
  arbitrate_channel(read_, now);
  arbitrate_channel(write_, now);
}

}  // namespace tisim
