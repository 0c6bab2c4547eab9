// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_DESCRIPTOR_HPP_
#define TISIM_DESCRIPTOR_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tisim {

// Kind codes are the values stored in word0 bits[5:1].
enum class DescriptorKind : std::uint8_t {
  kDelay = 1,
  kRead = 2,
  kWrite = 3,
  kReadFix = 4,
  kWriteFix = 5,
};

std::string_view to_string(DescriptorKind kind);
std::optional<DescriptorKind> parse_kind(std::string_view name);

constexpr bool is_read(DescriptorKind k) {
  return k == DescriptorKind::kRead || k == DescriptorKind::kReadFix;
}
constexpr bool is_fixed_address(DescriptorKind k) {
  return k == DescriptorKind::kReadFix || k == DescriptorKind::kWriteFix;
}

inline constexpr std::uint32_t kMaxSizeBytes = 8192;
inline constexpr std::uint32_t kMaxReps = 64;

// One traffic action. For kDelay, address and size_bytes are ignored; for
// every other kind delay_cycles is ignored. Equality compares only the
// fields that are meaningful for the kind.
struct Descriptor {
  DescriptorKind kind = DescriptorKind::kRead;
  std::uint32_t address = 0;
  std::uint32_t size_bytes = 4;
  std::uint32_t delay_cycles = 0;
  std::uint32_t reps = 1;
  bool last = false;
  bool irq_on_done = false;

  friend bool operator==(const Descriptor& a, const Descriptor& b);
};

struct DescriptorWords {
  std::uint32_t word0 = 0;
  std::uint32_t word1 = 0;

  friend bool operator==(const DescriptorWords&,
                         const DescriptorWords&) = default;
};

namespace desc_bits {
inline constexpr std::uint32_t kLast = 1u << 0;
inline constexpr unsigned kKindShift = 1;
inline constexpr std::uint32_t kKindMask = 0x1Fu;
inline constexpr std::uint32_t kIrq = 1u << 6;
inline constexpr unsigned kRepsShift = 7;
inline constexpr std::uint32_t kRepsMask = 0x3Fu;
inline constexpr unsigned kSizeShift = 13;
inline constexpr std::uint32_t kSizeMask = 0x1FFFu;
inline constexpr std::uint32_t kReservedMask = 0xFC000000u;
}  // namespace desc_bits

// Violations of the Descriptor invariants, as human-readable strings.
// Empty iff `d` is valid.
std::vector<std::string> validate(const Descriptor& d);

// Throws InvalidDescriptor when validate() reports anything.
DescriptorWords encode(const Descriptor& d);

// Throws ReservedBitsSet, InvalidKindCode, or InvalidDescriptor (a DELAY
// whose word1 is zero), checked in that order.
Descriptor decode(DescriptorWords w);

// Little-endian (word0, word1) pairs.
std::vector<std::uint8_t> to_image(std::span<const Descriptor> ds);
std::vector<DescriptorWords> words_from_image(std::span<const std::uint8_t> bytes);

}  // namespace tisim

#endif  // TISIM_DESCRIPTOR_HPP_
