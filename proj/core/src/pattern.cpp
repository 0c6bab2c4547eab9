// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "tisim/pattern.hpp"

#include <charconv>
#include <cstdio>
#include <limits>
#include <optional>

#include "tisim/errors.hpp"
#include "tisim/registers.hpp"

namespace tisim {

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

enum class NumErr { kNone, kSyntax, kRange };

// Parses decimal, or hex with a 0x prefix when allow_hex is set. Values that
// do not fit in 64 bits are range errors.
NumErr parse_number(std::string_view tok, bool allow_hex, std::uint64_t& out) {
  int base = 10;
  if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
    if (!allow_hex) return NumErr::kSyntax;
    base = 16;
    tok.remove_prefix(2);
  }
  if (tok.empty()) return NumErr::kSyntax;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out, base);
  if (ec == std::errc::result_out_of_range) return NumErr::kRange;
  if (ec != std::errc() || ptr != end) return NumErr::kSyntax;
  return NumErr::kNone;
}

std::uint32_t checked_field(std::string_view tok, bool allow_hex,
                            std::uint64_t lo, std::uint64_t hi,
                            std::size_t line, const char* field) {
  std::uint64_t v = 0;
  switch (parse_number(tok, allow_hex, v)) {
    case NumErr::kSyntax:
      throw SyntaxError(line, std::string("malformed ") + field + " '" +
                                  std::string(tok) + "'");
    case NumErr::kRange:
      throw RangeError(line, field);
    case NumErr::kNone:
      break;
  }
  if (v < lo || v > hi) throw RangeError(line, field);
  return static_cast<std::uint32_t>(v);
}

// "key=value" with a fixed key; nullopt if the key does not match.
std::optional<std::string_view> keyed(std::string_view tok, std::string_view key) {
  if (tok.size() > key.size() && tok.substr(0, key.size()) == key &&
      tok[key.size()] == '=') {
    return tok.substr(key.size() + 1);
  }
  return std::nullopt;
}

Stmt parse_line(const std::vector<std::string_view>& toks, std::size_t line) {
  const std::string_view op = toks[0];
  if (op == "delay") {
    if (toks.size() != 2) throw SyntaxError(line, "expected 'delay CYCLES'");
    return DelayStmt{checked_field(toks[1], false, 1,
                                   std::numeric_limits<std::uint32_t>::max(),
                                   line, "delay"),
                     line};
  }
  const auto kind = parse_kind(op);
  if (!kind || *kind == DescriptorKind::kDelay) {
    throw SyntaxError(line, "unknown statement '" + std::string(op) + "'");
  }
  if (toks.size() < 2 || toks[1].find('=') != std::string_view::npos) {
    throw SyntaxError(line, "missing address");
  }
  AccessStmt s;
  s.kind = *kind;
  s.line = line;
  s.address = checked_field(toks[1], true, 0,
                            std::numeric_limits<std::uint32_t>::max(), line,
                            "address");
  std::size_t i = 2;
  if (i < toks.size()) {
    if (auto v = keyed(toks[i], "size")) {
      s.size_bytes = checked_field(*v, false, 1, kMaxSizeBytes, line, "size");
      ++i;
    }
  }
  if (i < toks.size()) {
    if (auto v = keyed(toks[i], "reps")) {
      s.reps = checked_field(*v, false, 1, kMaxReps, line, "reps");
      ++i;
    }
  }
  if (i < toks.size()) {
    throw SyntaxError(line, "unexpected token '" + std::string(toks[i]) + "'");
  }
  return s;
}

}  // namespace

PatternProgram parse_pattern(std::string_view text) {
  PatternProgram prog;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    prog.statements.push_back(parse_line(toks, line_no));
  }
  if (prog.statements.empty()) throw SyntaxError(1, "empty program");
  return prog;
}

std::vector<Descriptor> lower(const PatternProgram& program) {
  std::vector<Descriptor> out;
  out.reserve(program.statements.size());
  for (const auto& stmt : program.statements) {
    Descriptor d;
    if (const auto* a = std::get_if<AccessStmt>(&stmt)) {
      d.kind = a->kind;
      d.address = a->address;
      d.size_bytes = a->size_bytes;
      d.reps = a->reps;
    } else {
      d.kind = DescriptorKind::kDelay;
      d.delay_cycles = std::get<DelayStmt>(stmt).cycles;
    }
    out.push_back(d);
  }
  if (!out.empty()) out.back().last = true;
  return out;
}

std::uint32_t CtrlFlags::bits() const {
  return (loop ? regs::ctrl::kLoop : 0u) |
         (irq_enable ? regs::ctrl::kIrqEnable : 0u) |
         (pipelined ? regs::ctrl::kPipeEnable : 0u);
}

ApbWriteSequence emit_apb_sequence(std::span<const Descriptor> ds,
                                   const CtrlFlags& ctrl) {
  if (2 * ds.size() > regs::kBufferWords) {
    throw CapacityExceeded(std::to_string(ds.size()) + " descriptors need " +
                           std::to_string(2 * ds.size()) +
                           " buffer words; capacity is " +
                           std::to_string(regs::kBufferWords));
  }
  ApbWriteSequence seq;
  seq.reserve(2 * ds.size() + 1);
  std::uint32_t offset = regs::kBufferBase;
  for (const auto& d : ds) {
    const auto w = encode(d);
    seq.push_back({offset, w.word0});
    seq.push_back({offset + 4, w.word1});
    offset += 8;
  }
  seq.push_back({regs::kCtrl, regs::ctrl::kEnable | ctrl.bits()});
  return seq;
}

std::string to_hex_listing(std::span<const Descriptor> ds) {
  std::string out;
  char buf[16];
  for (const auto& d : ds) {
    const auto w = encode(d);
    std::snprintf(buf, sizeof buf, "%08x\n", w.word0);
    out += buf;
    std::snprintf(buf, sizeof buf, "%08x\n", w.word1);
    out += buf;
  }
  return out;
}

std::string to_apb_csv(const ApbWriteSequence& seq) {
  std::string out = "offset,value\n";
  char buf[32];
  for (const auto& w : seq) {
    std::snprintf(buf, sizeof buf, "0x%03x,0x%08x\n", w.offset, w.value);
    out += buf;
  }
  return out;
}

ApbWriteSequence parse_apb_csv(std::string_view csv) {
  ApbWriteSequence seq;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < csv.size()) {
    std::size_t nl = csv.find('\n', pos);
    if (nl == std::string_view::npos) nl = csv.size();
    std::string_view line = csv.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || (line_no == 1 && line == "offset,value")) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw SyntaxError(line_no, "expected offset,value");
    std::uint64_t off = 0, val = 0;
    if (parse_number(line.substr(0, comma), true, off) != NumErr::kNone ||
        parse_number(line.substr(comma + 1), true, val) != NumErr::kNone ||
        off > 0xFFFFFFFFu || val > 0xFFFFFFFFu) {
      throw SyntaxError(line_no, "malformed offset,value row");
    }
    seq.push_back({static_cast<std::uint32_t>(off), static_cast<std::uint32_t>(val)});
  }
  return seq;
}

}  // namespace tisim
