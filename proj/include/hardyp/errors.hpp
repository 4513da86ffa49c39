#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hardyp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed the configured memory cap.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::uint64_t requested_bytes, std::uint64_t cap_bytes)
      : Error(what + " (requested " + std::to_string(requested_bytes) + " bytes, cap " +
              std::to_string(cap_bytes) + " bytes)"),
        requested_(requested_bytes),
        cap_(cap_bytes) {}

  /// A limit other than bytes, described entirely by `what`.
  explicit ResourceError(const std::string& what) : Error(what), requested_(0), cap_(0) {}

  std::uint64_t requested_bytes() const noexcept { return requested_; }
  std::uint64_t cap_bytes() const noexcept { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

/// An index exceeds the sieve limit of the prime table; the caller must re-sieve.
class TableTooSmall : public Error {
 public:
  TableTooSmall(std::uint64_t n, std::uint64_t limit)
      : Error("index " + std::to_string(n) + " exceeds prime table limit " + std::to_string(limit)),
        n_(n),
        limit_(limit) {}

  std::uint64_t index() const noexcept { return n_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::uint64_t n_;
  std::uint64_t limit_;
};

/// A value fell outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A result was not finite.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace hardyp
