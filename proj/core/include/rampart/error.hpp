#pragma once

#include <stdexcept>
#include <string>

namespace rampart {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor/op shape disagreement; message names the op and the shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed input file (pcap, dataset, checkpoint). Carries a byte offset
// when one is meaningful.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, uint64_t offset)
      : Error(msg + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  explicit ParseError(const std::string& msg) : Error(msg), offset_(0) {}
  uint64_t offset() const { return offset_; }

 private:
  uint64_t offset_;
};

// Bad configuration or bad usage (maps to CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input is well-formed but outside the supported feature set (e.g. a capture
// with a non-Ethernet link type).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rampart
