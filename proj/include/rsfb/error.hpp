#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rsfb {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Quantized directions are (numerically) collinear; ZF precoding undefined.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// Invalid combination of experiment or command-line settings.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Inverse feedback-bit law has no real solution for the given target.
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string subexpression, const std::string& what)
      : Error(what + " [" + subexpression + "]"), subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// A closed form lost too much accuracy to be trusted.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsfb
