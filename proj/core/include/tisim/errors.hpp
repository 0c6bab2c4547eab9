// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef TISIM_ERRORS_HPP_
#define TISIM_ERRORS_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tisim {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDescriptor : public Error {
 public:
  using Error::Error;
};

// Kind code 0 or > 5 in word0 bits[5:1].
class InvalidKindCode : public Error {
 public:
  explicit InvalidKindCode(std::uint32_t code)
      : Error("invalid descriptor kind code " + std::to_string(code)),
        code_(code) {}
  std::uint32_t code() const { return code_; }

 private:
  std::uint32_t code_;
};

class ReservedBitsSet : public Error {
 public:
  explicit ReservedBitsSet(std::uint32_t word0)
      : Error("descriptor word0 reserved bits[31:26] set"), word0_(word0) {}
  std::uint32_t word0() const { return word0_; }

 private:
  std::uint32_t word0_;
};

// Parse failures carry the 1-based source line.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class RangeError : public Error {
 public:
  RangeError(std::size_t line, const std::string& field)
      : Error("line " + std::to_string(line) + ": " + field + " out of range"),
        line_(line),
        field_(field) {}
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

class OffsetOutOfRange : public Error {
 public:
  explicit OffsetOutOfRange(std::uint32_t offset)
      : Error("configuration offset out of range: " + std::to_string(offset)),
        offset_(offset) {}
  std::uint32_t offset() const { return offset_; }

 private:
  std::uint32_t offset_;
};

class UnknownMaster : public Error {
 public:
  using Error::Error;
};

// Topology problems; path() is the offending field, e.g. "masters[1].bus".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class EmptySamples : public Error {
 public:
  EmptySamples() : Error("percentile of an empty sample set") {}
};

}  // namespace tisim

#endif  // TISIM_ERRORS_HPP_
