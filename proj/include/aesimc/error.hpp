#pragma once

#include <stdexcept>
#include <string>

namespace aesimc {

// Base of every error raised by the simulator. Perf-metric formula domain
// violations use std::domain_error instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Row/column index outside the array or buffer.
class AddressError : public Error {
 public:
  using Error::Error;
};

// Cell level outside 0..15.
class LevelRangeError : public Error {
 public:
  using Error::Error;
};

// Summing amplifier used with a missing or already-occupied operand slot.
class AmpStateError : public Error {
 public:
  using Error::Error;
};

// Write-back aimed at a key or LUT row.
class ProtectionError : public Error {
 public:
  using Error::Error;
};

// Missing round keys, unprogrammed LUTs, malformed layout.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// ShiftRows needs a cross-unit byte but the exchange channel is down.
class InterconnectError : public Error {
 public:
  using Error::Error;
};

// Not enough buffer rows, or a write ceiling was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
};

// Wrong key/block length or malformed hex.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace aesimc
