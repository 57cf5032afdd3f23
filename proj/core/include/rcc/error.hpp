#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rcc {

enum class ErrorKind {
  bounds,
  degenerate_region,
  zero_intensity,
  domain,
  monotonicity,
  dimension,
  parse,
  degenerate_row,
  insufficient_data,
  configuration,
  optimisation_failed,
  degenerate_regression,
  zero_vector,
  undefined_ratio,
  degenerate_channel,
  insufficient_images,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Errors that describe bad input or configuration, as opposed to a
/// numerical failure inside an otherwise valid computation.
bool is_validation_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rcc
