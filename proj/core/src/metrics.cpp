// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "tisim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "tisim/errors.hpp"

namespace tisim {

std::string_view to_string(MasterRole r) {
  switch (r) {
    case MasterRole::kVictim:
      return "victim";
    case MasterRole::kInjector:
      return "injector";
    case MasterRole::kProgrammer:
      return "programmer";
  }
  return "?";
}

Cycle percentile(std::span<const Cycle> samples, double q) {
  if (samples.empty()) throw EmptySamples();
  if (!(q >= 0.0 && q <= 100.0)) {
    throw std::invalid_argument("percentile rank must lie in [0, 100]");
  }
  std::vector<Cycle> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  // q * n is exact for integral q, so the division carries the only rounding.
  auto rank = static_cast<std::size_t>(std::ceil(q * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

const MasterMetrics* MetricsRecord::find(std::string_view master) const {
  for (const auto& m : masters) {
    if (m.name == master) return &m;
  }
  return nullptr;
}

void MetricsCollector::add_master(MasterId id, std::string name, MasterRole role) {
  if (series_.count(id) == 0) order_.push_back(id);
  series_[id] = Series{std::move(name), role, 0, {}, {}, {}};
}

void MetricsCollector::record(const Transaction& txn) {
  auto it = series_.find(txn.master);
  if (it == series_.end()) return;
  Series& s = it->second;
  s.bytes += txn.size_bytes;
  s.latencies.push_back(txn.complete - txn.request);
  s.first_request = std::min(s.first_request.value_or(txn.request), txn.request);
  s.last_complete = std::max(s.last_complete.value_or(txn.complete), txn.complete);
  txns_.push_back({s.name, txn});
  ++total_;
}

MetricsRecord MetricsCollector::finish(std::string scenario) const {
  MetricsRecord rec;
  rec.scenario = std::move(scenario);
  rec.transactions = txns_;
  for (MasterId id : order_) {
    const Series& s = series_.at(id);
    MasterMetrics m;
    m.name = s.name;
    m.role = s.role;
    m.txn_count = s.latencies.size();
    m.total_bytes = s.bytes;
    m.latencies = s.latencies;
    m.first_request = s.first_request;
    m.completion_cycle = s.last_complete;
    if (!s.latencies.empty()) {
      const double sum = std::accumulate(s.latencies.begin(), s.latencies.end(), 0.0);
      m.avg_latency = sum / static_cast<double>(s.latencies.size());
      m.p50 = percentile(s.latencies, 50);
      m.p95 = percentile(s.latencies, 95);
      m.max_latency = *std::max_element(s.latencies.begin(), s.latencies.end());
      const Cycle span = *s.last_complete - *s.first_request;
      m.bandwidth = span > 0 ? static_cast<double>(s.bytes) / static_cast<double>(span) : 0.0;
    }
    rec.masters.push_back(std::move(m));
  }
  return rec;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

template <typename T>
std::string opt_int(const std::optional<T>& v) {
  return v ? std::to_string(*v) : std::string();
}

}  // namespace

std::string emit_csv(std::span<const MetricsRecord> records) {
  struct Row {
    std::string scenario;
    const MasterMetrics* m;
  };
  std::vector<Row> rows;
  for (const auto& r : records) {
    // Runs cut short by the cycle limit are flagged in the scenario column.
    const std::string scenario = r.partial ? r.scenario + "/partial" : r.scenario;
    for (const auto& m : r.masters) rows.push_back({scenario, &m});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.scenario, a.m->name) < std::tie(b.scenario, b.m->name);
  });

  std::string out =
      "scenario,master,role,txn_count,bytes,avg_latency,p50,p95,max_latency,"
      "bandwidth,completion_cycle,slowdown\n";
  for (const auto& row : rows) {
    const MasterMetrics& m = *row.m;
    out += row.scenario;
    out += ',' + m.name + ',';
    out += to_string(m.role);
    out += ',' + std::to_string(m.txn_count);
    out += ',' + std::to_string(m.total_bytes);
    out += ',' + (m.avg_latency ? fixed6(*m.avg_latency) : std::string());
    out += ',' + opt_int(m.p50);
    out += ',' + opt_int(m.p95);
    out += ',' + opt_int(m.max_latency);
    out += ',' + fixed6(m.bandwidth);
    out += ',' + opt_int(m.completion_cycle);
    out += ',';
    if (m.role == MasterRole::kVictim && m.slowdown) out += fixed6(*m.slowdown);
    out += '\n';
  }
  return out;
}

std::string emit_txn_csv(std::span<const MetricsRecord> records) {
  std::string out = "scenario,master,txn_id,kind,address,beats,request,grant,complete\n";
  char addr[16];
  for (const auto& r : records) {
    for (const auto& t : r.transactions) {
      std::snprintf(addr, sizeof addr, "0x%08x", t.txn.address);
      out += r.scenario + ',' + t.master + ',' + std::to_string(t.txn.id) + ',';
      out += to_string(t.txn.kind);
      out += std::string(",") + addr + ',' + std::to_string(t.txn.beats) + ',' +
             std::to_string(t.txn.request) + ',' + std::to_string(t.txn.grant) +
             ',' + std::to_string(t.txn.complete) + '\n';
    }
  }
  return out;
}

}  // namespace tisim
