#pragma once

#include <cstddef>
#include <functional>

namespace rcc {

/// Hardware concurrency, at least 1.
std::size_t default_workers() noexcept;

/// Runs fn(i) for i in [0, n) on up to `workers` threads (0 means
/// default_workers()). Indices are handed out dynamically; the first
/// exception thrown by any call is rethrown after all threads join.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace rcc
