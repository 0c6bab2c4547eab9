// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_PATTERN_HPP_
#define TISIM_PATTERN_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tisim/descriptor.hpp"

namespace tisim {

// Traffic-pattern DSL (.tig files). One statement per line:
//
//   read|write|read_fix|write_fix ADDR [size=INT] [reps=INT]
//   delay INT
//
// ADDR is 0x-hex or decimal; size defaults to 4, reps to 1. '#' starts a
// comment.
struct AccessStmt {
  DescriptorKind kind = DescriptorKind::kRead;
  std::uint32_t address = 0;
  std::uint32_t size_bytes = 4;
  std::uint32_t reps = 1;
  std::size_t line = 0;

  friend bool operator==(const AccessStmt&, const AccessStmt&) = default;
};

struct DelayStmt {
  std::uint32_t cycles = 1;
  std::size_t line = 0;

  friend bool operator==(const DelayStmt&, const DelayStmt&) = default;
};

using Stmt = std::variant<AccessStmt, DelayStmt>;

struct PatternProgram {
  std::vector<Stmt> statements;
};

// Throws SyntaxError or RangeError, both carrying the line number.
PatternProgram parse_pattern(std::string_view text);

// One descriptor per statement; only the final one has last=true.
std::vector<Descriptor> lower(const PatternProgram& program);

struct CtrlFlags {
  bool loop = false;
  bool irq_enable = false;
  bool pipelined = false;

  std::uint32_t bits() const;
};

struct ApbWrite {
  std::uint32_t offset = 0;
  std::uint32_t value = 0;

  friend bool operator==(const ApbWrite&, const ApbWrite&) = default;
};

using ApbWriteSequence = std::vector<ApbWrite>;

// Buffer words first (0x400, 0x404, ...), then a single CTRL write with EN
// set plus `ctrl`. Throws CapacityExceeded past 256 words.
ApbWriteSequence emit_apb_sequence(std::span<const Descriptor> ds,
                                   const CtrlFlags& ctrl);

// Output renderings used by the compiler front end.
std::string to_hex_listing(std::span<const Descriptor> ds);
std::string to_apb_csv(const ApbWriteSequence& seq);
ApbWriteSequence parse_apb_csv(std::string_view csv);

}  // namespace tisim

#endif  // TISIM_PATTERN_HPP_
