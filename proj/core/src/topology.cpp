// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "tisim/topology.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tisim/errors.hpp"

namespace tisim {

using nlohmann::json;

std::string_view to_string(BusKind k) { return k == BusKind::kAhb ? "ahb" : "axi"; }

namespace {

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path.empty() ? key : path + "." + key, "required");
  return *it;
}

// Unsigned integer given as a JSON number or a decimal / 0x-hex string.
std::uint64_t as_uint(const json& v, const std::string& path,
                      std::uint64_t max = UINT64_MAX) {
  std::uint64_t out = 0;
  if (v.is_number_unsigned()) {
    out = v.get<std::uint64_t>();
  } else if (v.is_number_integer()) {
    throw ConfigError(path, "must not be negative");
  } else if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    try {
      std::size_t used = 0;
      const bool hex = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
      if (s.empty() || s[0] == '-' || s[0] == '+') throw std::invalid_argument(s);
      out = std::stoull(s, &used, hex ? 16 : 10);
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw ConfigError(path, "expected an unsigned integer, got '" + s + "'");
    }
  } else {
    throw ConfigError(path, "expected an unsigned integer");
  }
  if (out > max) throw ConfigError(path, "out of range");
  return out;
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

TxnKind as_txn_kind(const json& v, const std::string& path) {
  const auto s = as_string(v, path);
  if (s == "read") return TxnKind::kRead;
  if (s == "write") return TxnKind::kWrite;
  throw ConfigError(path, "expected \"read\" or \"write\"");
}

BusSpec parse_bus(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown_keys(j, path, {"name", "kind", "L", "policy", "O"});
  BusSpec b;
  b.name = as_string(require(j, path, "name"), path + ".name");
  const auto kind = as_string(require(j, path, "kind"), path + ".kind");
  if (kind == "ahb") {
    b.kind = BusKind::kAhb;
  } else if (kind == "axi") {
    b.kind = BusKind::kAxi;
  } else {
    throw ConfigError(path + ".kind", "expected \"ahb\" or \"axi\"");
  }
  b.first_latency = as_uint(require(j, path, "L"), path + ".L");
  if (auto it = j.find("policy"); it != j.end()) {
    const auto p = as_string(*it, path + ".policy");
    if (p == "fixed_priority") {
      b.policy = ArbitrationPolicy::kFixedPriority;
    } else if (p == "round_robin") {
      b.policy = ArbitrationPolicy::kRoundRobin;
    } else {
      throw ConfigError(path + ".policy", "expected \"fixed_priority\" or \"round_robin\"");
    }
  }
  if (auto it = j.find("O"); it != j.end()) {
    if (b.kind != BusKind::kAxi) throw ConfigError(path + ".O", "only valid for axi buses");
    b.max_outstanding = static_cast<std::uint32_t>(as_uint(*it, path + ".O", UINT32_MAX));
  }
  return b;
}

VictimSpec parse_victim(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown_keys(j, path,
                      {"period", "count", "kind", "address", "size_bytes", "start", "jitter"});
  VictimSpec v;
  v.period = as_uint(require(j, path, "period"), path + ".period");
  v.count = as_uint(require(j, path, "count"), path + ".count");
  if (auto it = j.find("kind"); it != j.end()) v.kind = as_txn_kind(*it, path + ".kind");
  if (auto it = j.find("address"); it != j.end()) {
    v.address = static_cast<std::uint32_t>(as_uint(*it, path + ".address", UINT32_MAX));
  }
  if (auto it = j.find("size_bytes"); it != j.end()) {
    v.size_bytes = static_cast<std::uint32_t>(as_uint(*it, path + ".size_bytes", UINT32_MAX));
  }
  if (auto it = j.find("start"); it != j.end()) v.start = as_uint(*it, path + ".start");
  if (auto it = j.find("jitter"); it != j.end()) v.jitter = as_uint(*it, path + ".jitter");
  return v;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InjectorSpec parse_injector(const json& j, const std::string& path,
                            const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown_keys(j, path, {"pattern", "pattern_file", "ctrl", "enabled", "config_base"});
  InjectorSpec s;
  const bool inline_src = j.contains("pattern");
  const bool file_src = j.contains("pattern_file");
  if (inline_src == file_src) {
    throw ConfigError(path + ".pattern", "give exactly one of pattern or pattern_file");
  }
  if (inline_src) {
    s.pattern = as_string(j.at("pattern"), path + ".pattern");
  } else {
    const auto rel = as_string(j.at("pattern_file"), path + ".pattern_file");
    const auto full = base_dir / rel;
    try {
      s.pattern = read_file(full);
    } catch (const Error&) {
      throw ConfigError(path + ".pattern_file", "cannot read " + full.string());
    }
    s.pattern_origin = rel;
  }
  if (auto it = j.find("ctrl"); it != j.end()) {
    const std::string cpath = path + ".ctrl";
    if (!it->is_object()) throw ConfigError(cpath, "expected an object");
    reject_unknown_keys(*it, cpath, {"loop", "irq_enable", "pipelined"});
    if (auto f = it->find("loop"); f != it->end()) s.ctrl.loop = as_bool(*f, cpath + ".loop");
    if (auto f = it->find("irq_enable"); f != it->end()) {
      s.ctrl.irq_enable = as_bool(*f, cpath + ".irq_enable");
    }
    if (auto f = it->find("pipelined"); f != it->end()) {
      s.ctrl.pipelined = as_bool(*f, cpath + ".pipelined");
    }
  }
  if (auto it = j.find("enabled"); it != j.end()) s.enabled = as_bool(*it, path + ".enabled");
  if (auto it = j.find("config_base"); it != j.end()) {
    s.config_base = static_cast<std::uint32_t>(as_uint(*it, path + ".config_base", UINT32_MAX));
  }
  return s;
}

MasterSpec parse_master(const json& j, const std::string& path,
                        const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown_keys(j, path, {"name", "bus", "role", "victim", "injector"});
  MasterSpec m;
  m.name = as_string(require(j, path, "name"), path + ".name");
  m.bus = as_string(require(j, path, "bus"), path + ".bus");
  const auto role = as_string(require(j, path, "role"), path + ".role");
  if (role == "victim") {
    m.role = MasterRole::kVictim;
    if (j.contains("injector")) throw ConfigError(path + ".injector", "not allowed for a victim");
    m.victim = parse_victim(require(j, path, "victim"), path + ".victim");
  } else if (role == "injector") {
    m.role = MasterRole::kInjector;
    if (j.contains("victim")) throw ConfigError(path + ".victim", "not allowed for an injector");
    m.injector = parse_injector(require(j, path, "injector"), path + ".injector", base_dir);
  } else {
    throw ConfigError(path + ".role", "expected \"victim\" or \"injector\"");
  }
  return m;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

Topology parse_topology(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed configuration: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "configuration must be an object");
  reject_unknown_keys(doc, "",
                      {"seed", "max_cycles", "program_via", "program_at", "buses", "masters"});
  Topology t;
  if (auto it = doc.find("seed"); it != doc.end()) t.seed = as_uint(*it, "seed");
  if (auto it = doc.find("max_cycles"); it != doc.end()) t.max_cycles = as_uint(*it, "max_cycles");
  if (auto it = doc.find("program_at"); it != doc.end()) t.program_at = as_uint(*it, "program_at");
  if (auto it = doc.find("program_via"); it != doc.end()) {
    const auto s = as_string(*it, "program_via");
    if (s == "config_port") {
      t.program_via = ProgramPath::kConfigPort;
    } else if (s == "data_bus") {
      t.program_via = ProgramPath::kDataBus;
    } else {
      throw ConfigError("program_via", "expected \"config_port\" or \"data_bus\"");
    }
  }
  const json& buses = require(doc, "", "buses");
  if (!buses.is_array()) throw ConfigError("buses", "expected an array");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    t.buses.push_back(parse_bus(buses[i], "buses[" + std::to_string(i) + "]"));
  }
  const json& masters = require(doc, "", "masters");
  if (!masters.is_array()) throw ConfigError("masters", "expected an array");
  for (std::size_t i = 0; i < masters.size(); ++i) {
    t.masters.push_back(parse_master(masters[i], "masters[" + std::to_string(i) + "]", base_dir));
  }
  validate_topology(t);
  return t;
}

Topology load_topology(const std::filesystem::path& file) {
  std::string text;
  try {
    text = read_file(file);
  } catch (const Error&) {
    throw ConfigError("", "cannot read configuration " + file.string());
  }
  return parse_topology(text, file.parent_path());
}

void validate_topology(const Topology& t) {
  if (t.max_cycles < 1) throw ConfigError("max_cycles", "must be at least 1");
  std::set<std::string> bus_names;
  for (std::size_t i = 0; i < t.buses.size(); ++i) {
    const auto path = "buses[" + std::to_string(i) + "]";
    const BusSpec& b = t.buses[i];
    if (b.name.empty()) throw ConfigError(path + ".name", "must not be empty");
    if (!bus_names.insert(b.name).second) throw ConfigError(path + ".name", "duplicate bus name");
    if (b.first_latency < 1) throw ConfigError(path + ".L", "must be at least 1");
    if (b.max_outstanding < 1) throw ConfigError(path + ".O", "must be at least 1");
  }
  if (t.masters.empty()) throw ConfigError("masters", "at least one master is required");
  std::set<std::string> master_names;
  for (std::size_t i = 0; i < t.masters.size(); ++i) {
    const auto path = "masters[" + std::to_string(i) + "]";
    const MasterSpec& m = t.masters[i];
    if (m.name.empty()) throw ConfigError(path + ".name", "must not be empty");
    if (!master_names.insert(m.name).second) {
      throw ConfigError(path + ".name", "duplicate master name");
    }
    if (bus_names.count(m.bus) == 0) {
      throw ConfigError(path + ".bus", "unknown bus '" + m.bus + "'");
    }
    if (m.role == MasterRole::kVictim) {
      const VictimSpec& v = m.victim;
      if (v.period < 1) throw ConfigError(path + ".victim.period", "must be at least 1");
      if (v.count < 1) throw ConfigError(path + ".victim.count", "must be at least 1");
      if (v.size_bytes < 1 || v.size_bytes > kMaxSizeBytes) {
        throw ConfigError(path + ".victim.size_bytes", "must lie in [1, 8192]");
      }
    } else if (m.role != MasterRole::kInjector) {
      throw ConfigError(path + ".role", "expected victim or injector");
    }
  }
}

std::string canonical_json(const Topology& t) {
  json doc;
  doc["seed"] = t.seed;
  doc["max_cycles"] = t.max_cycles;
  doc["program_via"] = t.program_via == ProgramPath::kDataBus ? "data_bus" : "config_port";
  doc["program_at"] = t.program_at;
  doc["buses"] = json::array();
  for (const auto& b : t.buses) {
    json jb{{"name", b.name},
            {"kind", to_string(b.kind)},
            {"L", b.first_latency},
            {"policy", to_string(b.policy)}};
    if (b.kind == BusKind::kAxi) jb["O"] = b.max_outstanding;
    doc["buses"].push_back(std::move(jb));
  }
  doc["masters"] = json::array();
  for (const auto& m : t.masters) {
    json jm{{"name", m.name}, {"bus", m.bus}, {"role", to_string(m.role)}};
    if (m.role == MasterRole::kVictim) {
      const auto& v = m.victim;
      jm["victim"] = {{"period", v.period},    {"count", v.count},
                      {"kind", to_string(v.kind)}, {"address", v.address},
                      {"size_bytes", v.size_bytes}, {"start", v.start},
                      {"jitter", v.jitter}};
    } else {
      const auto& s = m.injector;
      jm["injector"] = {{"pattern", s.pattern},
                        {"ctrl",
                         {{"loop", s.ctrl.loop},
                          {"irq_enable", s.ctrl.irq_enable},
                          {"pipelined", s.ctrl.pipelined}}},
                        {"enabled", s.enabled},
                        {"config_base", s.config_base}};
    }
    doc["masters"].push_back(std::move(jm));
  }
  return doc.dump();
}

std::uint64_t topology_hash(const Topology& t) { return fnv1a64(canonical_json(t)); }

Topology without_injectors(const Topology& t) {
  Topology out = t;
  std::erase_if(out.masters, [](const MasterSpec& m) { return m.role == MasterRole::kInjector; });
  return out;
}

}  // namespace tisim
