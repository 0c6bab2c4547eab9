// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "tisim/injector.hpp"

#include <algorithm>

#include "tisim/errors.hpp"

namespace tisim {

namespace ctrl = regs::ctrl;
namespace status = regs::status;

Injector::Injector(std::uint32_t id) : id_(id) {}

void Injector::apb_write(std::uint32_t offset, std::uint32_t value) {
  if (offset >= regs::kWindowEnd) throw OffsetOutOfRange(offset);
  if (offset >= regs::kBufferBase) {
    buffer_[(offset - regs::kBufferBase) >> 2] = value;
    return;
  }
  if ((offset & ~3u) != regs::kCtrl) return;  // read-only or unmapped

  if (value & ctrl::kReset) {
    reset();
    return;
  }
  const bool was_enabled = enabled();
  ctrl_ = value & ctrl::kWritableMask;
  if (!enabled()) {
    start_pending_ = false;
  } else if (!was_enabled && !running_ && !error_) {
    start_pending_ = true;
  }
}

std::uint32_t Injector::apb_read(std::uint32_t offset) const {
  if (offset >= regs::kWindowEnd) throw OffsetOutOfRange(offset);
  if (offset >= regs::kBufferBase) return buffer_[(offset - regs::kBufferBase) >> 2];
  switch (offset & ~3u) {
    case regs::kCtrl:
      return ctrl_;
    case regs::kStatus:
      return (done_ ? status::kDone : 0u) | (error_ ? status::kErr : 0u) |
             (running_ || start_pending_ ? status::kBusy : 0u) |
             (irq_pending_ ? status::kIrq : 0u) |
             (static_cast<std::uint32_t>(fsm_code()) << status::kFsmShift) |
             (completed_ << status::kCountShift);
    case regs::kErrInfo:
      return err_info_;
    case regs::kCap:
      return regs::kBufferWords;
    default:
      return 0;
  }
}

void Injector::reset() {
  clear_engine();
  ctrl_ = ctrl::kResetValue;
  err_info_ = 0;
  completed_ = 0;
  irq_pending_ = false;
  start_pending_ = false;
  running_ = false;
  done_ = false;
  error_ = false;
}

void Injector::on_complete(TxnId txn, Cycle /*now*/) {
  if (exec_.active && exec_.txn && *exec_.txn == txn) exec_.txn_done = true;
}

void Injector::clear_engine() {
  fetched_ = {};
  decoded_ = {};
  exec_ = {};
  next_fetch_ = 0;
  fetch_stopped_ = false;
}

void Injector::start_engine() {
  clear_engine();
  running_ = true;
  done_ = false;
  pipelined_ = (ctrl_ & ctrl::kPipeEnable) != 0;
}

void Injector::step(Cycle now, BusPort& port) {
  if (start_pending_) {
    start_pending_ = false;
    start_engine();
  }
  if (!running_ || !enabled()) return;

  advance_exec(now, port);
  if (!running_) return;

  if (pipelined_) {
    if (!exec_.active && decoded_.valid) {
      begin_exec(decoded_, now, port);
      decoded_.valid = false;
    }
    if (!decoded_.valid && fetched_.valid && !decode_latch(now)) return;
    if (!fetched_.valid) fetch(now);
    return;
  }

  // Legacy: a single stage is busy per cycle.
  if (exec_.active) return;
  if (decoded_.valid) {
    begin_exec(decoded_, now, port);
    decoded_.valid = false;
  } else if (fetched_.valid) {
    decode_latch(now);
  } else {
    fetch(now);
  }
}

bool Injector::advance_exec(Cycle now, BusPort& port) {
  if (!exec_.active) return false;
  const Descriptor& d = exec_.desc;
  if (d.kind == DescriptorKind::kDelay) {
    if (now < exec_.delay_end) return false;
    if (++exec_.rep < d.reps) {
      exec_.delay_end = now + d.delay_cycles;
      return false;
    }
  } else {
    if (!exec_.txn_done) return false;
    if (!is_fixed_address(d.kind)) exec_.address += d.size_bytes;
    if (++exec_.rep < d.reps) {
      issue(now, port);
      return false;
    }
  }
  finish_descriptor(now);
  return true;
}

void Injector::begin_exec(const Latch& from, Cycle now, BusPort& port) {
  exec_ = {};
  exec_.active = true;
  exec_.index = from.index;
  exec_.desc = from.desc;
  exec_.address = from.desc.address;
  trace(now, Stage::kExec, StageEventKind::kBegin, exec_.index);
  if (exec_.desc.kind == DescriptorKind::kDelay) {
    exec_.delay_end = now + exec_.desc.delay_cycles;
  } else {
    issue(now, port);
  }
}

void Injector::issue(Cycle now, BusPort& port) {
  const TxnKind kind = is_read(exec_.desc.kind) ? TxnKind::kRead : TxnKind::kWrite;
  exec_.txn = port.submit(kind, exec_.address, exec_.desc.size_bytes, now);
  exec_.txn_done = false;
  trace(now, Stage::kExec, StageEventKind::kRequest, exec_.index);
}

void Injector::finish_descriptor(Cycle now) {
  const Descriptor d = exec_.desc;
  trace(now, Stage::kExec, StageEventKind::kEnd, exec_.index);
  exec_ = {};
  completed_ = std::min(completed_ + 1, status::kCountMax);
  if (d.irq_on_done && (ctrl_ & ctrl::kIrqEnable)) irq_pending_ = true;
  if (!d.last) return;
  if (!loop_enabled()) {
    clear_engine();
    running_ = false;
    done_ = true;
    trace(now, Stage::kExec, StageEventKind::kDone, 0);
  } else if (fetch_stopped_ && !fetched_.valid && !decoded_.valid) {
    // LOOP was raised after the last descriptor had been fetched.
    fetch_stopped_ = false;
    next_fetch_ = 0;
  }
}

bool Injector::decode_latch(Cycle now) {
  try {
    decoded_ = fetched_;
    decoded_.desc = decode(fetched_.words);
  } catch (const Error&) {
    halt_with_error(now, 2 * fetched_.index);
    return false;
  }
  fetched_.valid = false;
  trace(now, Stage::kDecode, StageEventKind::kEnd, decoded_.index);
  return true;
}

bool Injector::fetch(Cycle now) {
  if (fetch_stopped_) return false;
  const std::uint32_t idx = next_fetch_;
  if (2 * idx + 1 >= regs::kBufferWords) {
    // Ran off the end of the buffer without meeting a last descriptor.
    halt_with_error(now, 2 * idx);
    return false;
  }
  fetched_.valid = true;
  fetched_.index = idx;
  fetched_.words = {buffer_[2 * idx], buffer_[2 * idx + 1]};
  trace(now, Stage::kFetch, StageEventKind::kEnd, idx);
  if (fetched_.words.word0 & desc_bits::kLast) {
    if (loop_enabled()) {
      next_fetch_ = 0;
    } else {
      fetch_stopped_ = true;
    }
  } else {
    next_fetch_ = idx + 1;
  }
  return true;
}

void Injector::halt_with_error(Cycle now, std::uint32_t word_index) {
  clear_engine();
  running_ = false;
  error_ = true;
  err_info_ = word_index;
  trace(now, Stage::kDecode, StageEventKind::kError, word_index / 2);
}

regs::FsmCode Injector::fsm_code() const {
  using regs::FsmCode;
  if (error_) return FsmCode::kError;
  if (done_) return FsmCode::kDone;
  if (!running_) return FsmCode::kIdle;
  if (exec_.active) return FsmCode::kExec;
  if (fetched_.valid || decoded_.valid) return FsmCode::kDecode;
  return FsmCode::kFetch;
}

void Injector::trace(Cycle now, Stage stage, StageEventKind ev,
                     std::uint32_t index) const {
  if (trace_) trace_->on_stage({now, id_, stage, ev, index});
}

}  // namespace tisim
