#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace eithne {

/// Base of every exception thrown by the framework.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EncodeError : public Error {
 public:
  using Error::Error;
};

enum class DecodeFailure { kBadMagic, kUnsupportedVersion, kUnknownType, kBadElementType, kTruncated, kMalformed };

class DecodeError : public Error {
 public:
  DecodeError(DecodeFailure failure, const std::string& what) : Error(what), failure_(failure) {}
  DecodeFailure failure() const noexcept { return failure_; }

 private:
  DecodeFailure failure_;
};

/// The peer closed the stream or the socket failed. `bytes_read` counts the
/// bytes of the interrupted receive that did arrive.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what, std::size_t bytes_read = 0)
      : Error(what), bytes_read_(bytes_read) {}
  std::size_t bytes_read() const noexcept { return bytes_read_; }

 private:
  std::size_t bytes_read_;
};

class TimeoutError : public TransportError {
 public:
  using TransportError::TransportError;
};

class RegistryError : public Error {
 public:
  using Error::Error;
};

class MemoryBudgetError : public Error {
 public:
  MemoryBudgetError(const std::string& what, std::string offending, std::size_t overflow_bytes)
      : Error(what), offending_(std::move(offending)), overflow_bytes_(overflow_bytes) {}
  const std::string& offending() const noexcept { return offending_; }
  std::size_t overflow_bytes() const noexcept { return overflow_bytes_; }

 private:
  std::string offending_;
  std::size_t overflow_bytes_;
};

/// Unexpected reply type or length from the device.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// The device answered with an ERROR frame.
class DeviceError : public Error {
 public:
  DeviceError(const std::string& what, std::uint16_t code) : Error(what), code_(code) {}
  std::uint16_t code() const noexcept { return code_; }

 private:
  std::uint16_t code_;
};

class SpawnError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration or input document; `field` names the offending path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what) : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ReportError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace eithne
