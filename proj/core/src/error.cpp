#include "rcc/error.hpp"

namespace rcc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::bounds: return "bounds error";
    case ErrorKind::degenerate_region: return "degenerate region";
    case ErrorKind::zero_intensity: return "zero intensity";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::monotonicity: return "monotonicity error";
    case ErrorKind::dimension: return "dimension error";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::degenerate_row: return "degenerate row";
    case ErrorKind::insufficient_data: return "insufficient data";
    case ErrorKind::configuration: return "configuration error";
    case ErrorKind::optimisation_failed: return "optimisation failed";
    case ErrorKind::degenerate_regression: return "degenerate regression";
    case ErrorKind::zero_vector: return "zero vector";
    case ErrorKind::undefined_ratio: return "undefined ratio";
    case ErrorKind::degenerate_channel: return "degenerate channel";
    case ErrorKind::insufficient_images: return "insufficient images";
    case ErrorKind::io: return "i/o error";
  }
  return "error";
}

bool is_validation_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::optimisation_failed:
    case ErrorKind::degenerate_row:
    case ErrorKind::degenerate_regression:
    case ErrorKind::zero_intensity:
    case ErrorKind::zero_vector:
    case ErrorKind::undefined_ratio:
    case ErrorKind::degenerate_channel:
      return false;
    default:
      return true;
  }
}

}  // namespace rcc
