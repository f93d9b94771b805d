#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace etoa {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numeric errors (CLI exit code 3).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

class DegenerateDensity : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class VanishingCoincidence : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Configuration errors (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// I/O and event-format errors (CLI exit code 4).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed event stream. Carries the byte offset (binary) or the line
/// number (text) of the offending record when one is known.
class FormatError : public Error {
 public:
  enum class Kind { bad_header, corrupt_record, truncated, count_mismatch, bad_text };

  FormatError(Kind kind, const std::string& what,
              std::optional<std::uint64_t> byte_offset = std::nullopt,
              std::optional<std::uint64_t> line = std::nullopt)
      : Error(what), kind_(kind), byte_offset_(byte_offset), line_(line) {}

  Kind kind() const noexcept { return kind_; }
  std::optional<std::uint64_t> byte_offset() const noexcept { return byte_offset_; }
  std::optional<std::uint64_t> line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::optional<std::uint64_t> byte_offset_;
  std::optional<std::uint64_t> line_;
};

enum class ExitCode : int { ok = 0, config = 2, numeric = 3, io = 4 };

/// Maps an exception raised by the library onto the CLI exit-code classes.
ExitCode exit_code_for(const std::exception& e) noexcept;

}  // namespace etoa
