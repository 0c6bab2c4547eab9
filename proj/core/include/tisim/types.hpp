// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_TYPES_HPP_
#define TISIM_TYPES_HPP_

#include <cstdint>
#include <string_view>

namespace tisim {

using Cycle = std::uint64_t;
using TxnId = std::uint64_t;
using MasterId = std::uint32_t;

enum class TxnKind : std::uint8_t { kRead, kWrite };

constexpr std::string_view to_string(TxnKind kind) {
  return kind == TxnKind::kRead ? "read" : "write";
}

// Data bus width; a transfer of n bytes takes ceil(n / 4) beats.
inline constexpr std::uint32_t kBusWidthBytes = 4;

constexpr std::uint32_t beats_for(std::uint32_t size_bytes) {
  return size_bytes == 0 ? 1 : (size_bytes + kBusWidthBytes - 1) / kBusWidthBytes;
}

}  // namespace tisim

#endif  // TISIM_TYPES_HPP_
