// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_METRICS_HPP_
#define TISIM_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tisim/interconnect.hpp"
#include "tisim/types.hpp"

namespace tisim {

enum class MasterRole : std::uint8_t { kVictim, kInjector, kProgrammer };
std::string_view to_string(MasterRole r);

// Nearest-rank percentile: the element at 1-based rank ceil(q/100 * n) of
// the sorted samples. Throws EmptySamples; q must lie in [0, 100].
Cycle percentile(std::span<const Cycle> samples, double q);

struct MasterMetrics {
  std::string name;
  MasterRole role = MasterRole::kVictim;
  std::uint64_t txn_count = 0;
  std::uint64_t total_bytes = 0;
  std::vector<Cycle> latencies;  // complete - request, in completion order
  std::optional<double> avg_latency;
  std::optional<Cycle> p50;
  std::optional<Cycle> p95;
  std::optional<Cycle> max_latency;
  double bandwidth = 0.0;  // bytes per cycle over the master's active interval
  std::optional<Cycle> first_request;
  std::optional<Cycle> completion_cycle;  // last completion
  std::optional<double> slowdown;

  friend bool operator==(const MasterMetrics&, const MasterMetrics&) = default;
};

struct TxnRecord {
  std::string master;
  Transaction txn;

  friend bool operator==(const TxnRecord&, const TxnRecord&) = default;
};

struct MetricsRecord {
  std::string scenario;
  std::vector<MasterMetrics> masters;  // in topology order
  std::vector<TxnRecord> transactions;  // in completion order
  std::uint64_t topology_hash = 0;
  std::uint64_t seed = 0;
  Cycle cycles = 0;
  bool partial = false;

  const MasterMetrics* find(std::string_view master) const;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

// Accumulates completed transactions per master during a run.
class MetricsCollector {
 public:
  void add_master(MasterId id, std::string name, MasterRole role);

  // `txn.complete` must be set. Transactions of unknown masters are dropped.
  void record(const Transaction& txn);

  std::uint64_t total_completed() const { return total_; }

  // Computes derived statistics; the collector can keep recording after.
  MetricsRecord finish(std::string scenario) const;

 private:
  struct Series {
    std::string name;
    MasterRole role;
    std::uint64_t bytes = 0;
    std::vector<Cycle> latencies;
    std::optional<Cycle> first_request;
    std::optional<Cycle> last_complete;
  };
  std::map<MasterId, Series> series_;
  std::vector<MasterId> order_;
  std::vector<TxnRecord> txns_;
  std::uint64_t total_ = 0;
};

// Header:
// scenario,master,role,txn_count,bytes,avg_latency,p50,p95,max_latency,
// bandwidth,completion_cycle,slowdown
// Rows sorted by (scenario, master); absent values are empty fields.
std::string emit_csv(std::span<const MetricsRecord> records);

// Header: scenario,master,txn_id,kind,address,beats,request,grant,complete
std::string emit_txn_csv(std::span<const MetricsRecord> records);

}  // namespace tisim

#endif  // TISIM_METRICS_HPP_
