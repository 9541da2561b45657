#pragma once

#include <stdexcept>
#include <string>

namespace kfib {

/* Root of every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/* A needed strict separation (sign, floor, ordering) could not be
 * certified before the precision policy ran out of bits. */
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class IndexBelowDefinition : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class NoPositiveEpsilon : public Error {
 public:
  using Error::Error;
};

class WindowTooLarge : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

/* First stage of a bound chain whose inequality failed certification. */
class ChainBroken : public Error {
 public:
  ChainBroken(std::string stage, const std::string& detail)
      : Error("chain broken at stage '" + stage + "': " + detail), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace kfib
