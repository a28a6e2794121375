#pragma once

#include <stdexcept>
#include <string>

namespace quasivis {

enum class ErrorKind {
  AllZero,
  NotPID,
  NotHammarhjelm,
  TolTooTight,
  RegionUnbounded,
  HypothesisFailed,
  InsufficientCover,
  ZeroElement,
  NotInResidueClass,
  DegenerateFit,
  InvalidArgument,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace quasivis
