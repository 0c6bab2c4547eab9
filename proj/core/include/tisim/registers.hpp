// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_REGISTERS_HPP_
#define TISIM_REGISTERS_HPP_

#include <cstdint>

// Configuration-port register map of the injector. See docs/register-map.md.
namespace tisim::regs {

inline constexpr std::uint32_t kCtrl = 0x000;
inline constexpr std::uint32_t kStatus = 0x004;
inline constexpr std::uint32_t kErrInfo = 0x008;
inline constexpr std::uint32_t kCap = 0x00C;
inline constexpr std::uint32_t kBufferBase = 0x400;
inline constexpr std::uint32_t kBufferWords = 256;
inline constexpr std::uint32_t kWindowEnd = 0x800;

namespace ctrl {
inline constexpr std::uint32_t kEnable = 1u << 0;
inline constexpr std::uint32_t kReset = 1u << 1;
inline constexpr std::uint32_t kLoop = 1u << 2;
inline constexpr std::uint32_t kIrqEnable = 1u << 3;
inline constexpr std::uint32_t kPipeEnable = 1u << 4;
inline constexpr std::uint32_t kResetValue = kPipeEnable;
inline constexpr std::uint32_t kWritableMask =
    kEnable | kLoop | kIrqEnable | kPipeEnable;
}  // namespace ctrl

namespace status {
inline constexpr std::uint32_t kDone = 1u << 0;
inline constexpr std::uint32_t kErr = 1u << 1;
inline constexpr std::uint32_t kBusy = 1u << 2;
// Sticky; set when an irq_on_done descriptor completes with IRQ_EN=1.
inline constexpr std::uint32_t kIrq = 1u << 3;
inline constexpr unsigned kFsmShift = 4;
inline constexpr std::uint32_t kFsmMask = 0xFu;
inline constexpr unsigned kCountShift = 16;
inline constexpr std::uint32_t kCountMax = 0xFFFFu;
}  // namespace status

// STATUS bits[7:4].
enum class FsmCode : std::uint32_t {
  kIdle = 0,
  kFetch = 1,
  kDecode = 2,
  kExec = 3,
  kDone = 4,
  kError = 5,
};

}  // namespace tisim::regs

#endif  // TISIM_REGISTERS_HPP_
