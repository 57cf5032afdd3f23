#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "rcc/parallel.hpp"

using namespace rcc;

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
  EXPECT_GE(default_workers(), 1u);
}

TEST(ParallelFor, RethrowsFirstException) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}
