#pragma once

#include <stdexcept>
#include <string>

namespace packetgrid {

// Base of every error the library throws. Denials, deferrals and validation
// findings are data, not errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad scenario or call parameters (zero packet size, unknown ids, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A request whose contiguous block cannot fit its window.
class InfeasibleRequestError : public Error {
 public:
  using Error::Error;
};

// A coordinator sent something the protocol forbids (duplicate announcement,
// settlement above the announced amount).
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

// Conservation, capacity or storage bounds broken. Aborts a run.
class InvariantFailure : public Error {
 public:
  using Error::Error;
};

// Trace or scenario file could not be read or is malformed.
class IngestError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// brute_force_schedule called outside its enumeration bounds.
class OracleBoundsError : public Error {
 public:
  using Error::Error;
};

}  // namespace packetgrid
