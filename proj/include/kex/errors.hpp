#pragma once

#include <stdexcept>
#include <string>

namespace kex {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TransportError : std::runtime_error {
  explicit TransportError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ProtocolError : std::runtime_error {
  explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InfeasibleSizeError : std::runtime_error {
  explicit InfeasibleSizeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kex
