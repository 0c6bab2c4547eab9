// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "tisim/descriptor.hpp"

#include "tisim/errors.hpp"

namespace tisim {

std::string_view to_string(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::kDelay:
      return "delay";
    case DescriptorKind::kRead:
      return "read";
    case DescriptorKind::kWrite:
      return "write";
    case DescriptorKind::kReadFix:
      return "read_fix";
    case DescriptorKind::kWriteFix:
      return "write_fix";
  }
  return "?";
}

std::optional<DescriptorKind> parse_kind(std::string_view name) {
  for (auto k : {DescriptorKind::kDelay, DescriptorKind::kRead,
                 DescriptorKind::kWrite, DescriptorKind::kReadFix,
                 DescriptorKind::kWriteFix}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

bool operator==(const Descriptor& a, const Descriptor& b) {
  if (a.kind != b.kind || a.reps != b.reps || a.last != b.last ||
      a.irq_on_done != b.irq_on_done) {
    return false;
  }
  if (a.kind == DescriptorKind::kDelay) return a.delay_cycles == b.delay_cycles;
  return a.address == b.address && a.size_bytes == b.size_bytes;
}

std::vector<std::string> validate(const Descriptor& d) {
  std::vector<std::string> out;
  const auto code = static_cast<unsigned>(d.kind);
  if (code < 1 || code > 5) out.emplace_back("kind invalid");
  if (d.reps < 1 || d.reps > kMaxReps) out.emplace_back("reps out of range");
  if (d.kind == DescriptorKind::kDelay) {
    if (d.delay_cycles < 1) out.emplace_back("delay out of range");
  } else if (d.size_bytes < 1 || d.size_bytes > kMaxSizeBytes) {
    out.emplace_back("size out of range");
  }
  return out;
}

DescriptorWords encode(const Descriptor& d) {
  if (auto v = validate(d); !v.empty()) {
    std::string msg = "invalid descriptor:";
    for (const auto& s : v) msg += " " + s + ";";
    throw InvalidDescriptor(msg);
  }
  using namespace desc_bits;
  DescriptorWords w;
  w.word0 = (d.last ? kLast : 0u) |
            (static_cast<std::uint32_t>(d.kind) << kKindShift) |
            (d.irq_on_done ? kIrq : 0u) | ((d.reps - 1) << kRepsShift);
  if (d.kind == DescriptorKind::kDelay) {
    w.word1 = d.delay_cycles;
  } else {
    w.word0 |= (d.size_bytes - 1) << kSizeShift;
    w.word1 = d.address;
  }
  return w;
}

Descriptor decode(DescriptorWords w) {
  using namespace desc_bits;
  if (w.word0 & kReservedMask) throw ReservedBitsSet(w.word0);
  const std::uint32_t code = (w.word0 >> kKindShift) & kKindMask;
  if (code < 1 || code > 5) throw InvalidKindCode(code);

  Descriptor d;
  d.kind = static_cast<DescriptorKind>(code);
  d.last = (w.word0 & kLast) != 0;
  d.irq_on_done = (w.word0 & kIrq) != 0;
  d.reps = ((w.word0 >> kRepsShift) & kRepsMask) + 1;
  d.size_bytes = ((w.word0 >> kSizeShift) & kSizeMask) + 1;
  if (d.kind == DescriptorKind::kDelay) {
    if (w.word1 == 0) throw InvalidDescriptor("delay of zero cycles");
    d.delay_cycles = w.word1;
    d.address = 0;
  } else {
    d.address = w.word1;
  }
  return d;
}

namespace {

void put_le32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

std::vector<std::uint8_t> to_image(std::span<const Descriptor> ds) {
  std::vector<std::uint8_t> out;
  out.reserve(ds.size() * 8);
  for (const auto& d : ds) {
    const auto w = encode(d);
    put_le32(out, w.word0);
    put_le32(out, w.word1);
  }
  return out;
}

std::vector<DescriptorWords> words_from_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 8 != 0) {
    throw InvalidDescriptor("descriptor image size is not a multiple of 8 bytes");
  }
  auto le32 = [&](std::size_t at) {
    return static_cast<std::uint32_t>(bytes[at]) |
           static_cast<std::uint32_t>(bytes[at + 1]) << 8 |
           static_cast<std::uint32_t>(bytes[at + 2]) << 16 |
           static_cast<std::uint32_t>(bytes[at + 3]) << 24;
  };
  std::vector<DescriptorWords> out;
  out.reserve(bytes.size() / 8);
  for (std::size_t i = 0; i < bytes.size(); i += 8) {
    out.push_back({le32(i), le32(i + 4)});
  }
  return out;
}

}  // namespace tisim
