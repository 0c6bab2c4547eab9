// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_TRACE_HPP_
#define TISIM_TRACE_HPP_

#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "tisim/types.hpp"

namespace tisim {

enum class BusEventKind : std::uint8_t { kReq, kGrant, kBeat, kComplete };
std::string_view to_string(BusEventKind e);

struct BusEvent {
  Cycle cycle = 0;
  std::string_view bus;  // Points at the owning bus's name.
  BusEventKind event = BusEventKind::kReq;
  MasterId master = 0;
  TxnId txn = 0;

  friend bool operator==(const BusEvent&, const BusEvent&) = default;
};

enum class Stage : std::uint8_t { kFetch, kDecode, kExec };
enum class StageEventKind : std::uint8_t {
  kBegin,
  kEnd,
  kRequest,
  kError,
  kDone,
};
std::string_view to_string(Stage s);
std::string_view to_string(StageEventKind e);

struct StageEvent {
  Cycle cycle = 0;
  std::uint32_t injector = 0;
  Stage stage = Stage::kFetch;
  StageEventKind event = StageEventKind::kBegin;
  std::uint32_t descriptor = 0;  // index into the descriptor buffer

  friend bool operator==(const StageEvent&, const StageEvent&) = default;
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void on_bus(const BusEvent&) {}
  virtual void on_stage(const StageEvent&) {}
};

// Buffers everything; the simple choice for tests and the CLI.
class RecordingSink : public TraceSink {
 public:
  void on_bus(const BusEvent& e) override;
  void on_stage(const StageEvent& e) override;

  const std::vector<BusEvent>& bus_events() const { return bus_; }
  const std::vector<StageEvent>& stage_events() const { return stages_; }
  // Header: cycle,bus,event,master_id,txn_id
  std::string bus_csv() const;
  // Header: cycle,injector_id,stage,event,descriptor
  std::string stage_csv() const;

 private:
  std::vector<BusEvent> bus_;
  std::deque<std::string> bus_names_;  // stable storage for the views
  std::vector<StageEvent> stages_;
};

}  // namespace tisim

#endif  // TISIM_TRACE_HPP_
