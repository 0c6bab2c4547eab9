// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "tisim/trace.hpp"

#include <algorithm>

namespace tisim {

std::string_view to_string(BusEventKind e) {
  switch (e) {
    case BusEventKind::kReq:
      return "REQ";
    case BusEventKind::kGrant:
      return "GRANT";
    case BusEventKind::kBeat:
      return "BEAT";
    case BusEventKind::kComplete:
      return "COMPLETE";
  }
  return "?";
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kFetch:
      return "FETCH";
    case Stage::kDecode:
      return "DECODE";
    case Stage::kExec:
      return "EXEC";
  }
  return "?";
}

std::string_view to_string(StageEventKind e) {
  switch (e) {
    case StageEventKind::kBegin:
      return "BEGIN";
    case StageEventKind::kEnd:
      return "END";
    case StageEventKind::kRequest:
      return "REQUEST";
    case StageEventKind::kError:
      return "ERROR";
    case StageEventKind::kDone:
      return "DONE";
  }
  return "?";
}

void RecordingSink::on_bus(const BusEvent& e) {
  // Interned so recorded events outlive the bus that emitted them.
  auto it = std::find(bus_names_.begin(), bus_names_.end(), e.bus);
  if (it == bus_names_.end()) {
    bus_names_.emplace_back(e.bus);
    it = bus_names_.end() - 1;
  }
  BusEvent copy = e;
  copy.bus = *it;
  bus_.push_back(copy);
}

void RecordingSink::on_stage(const StageEvent& e) { stages_.push_back(e); }

std::string RecordingSink::bus_csv() const {
  std::string out = "cycle,bus,event,master_id,txn_id\n";
  for (const auto& e : bus_) {
    out += std::to_string(e.cycle);
    out += ',';
    out += e.bus;
    out += ',';
    out += to_string(e.event);
    out += ',';
    out += std::to_string(e.master);
    out += ',';
    out += std::to_string(e.txn);
    out += '\n';
  }
  return out;
}

std::string RecordingSink::stage_csv() const {
  std::string out = "cycle,injector_id,stage,event,descriptor\n";
  for (const auto& e : stages_) {
    out += std::to_string(e.cycle) + ',' + std::to_string(e.injector) + ',';
    out += to_string(e.stage);
    out += ',';
    out += to_string(e.event);
    out += ',' + std::to_string(e.descriptor) + '\n';
  }
  return out;
}

}  // namespace tisim
