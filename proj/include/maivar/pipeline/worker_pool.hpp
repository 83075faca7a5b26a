#pragma once

#include <cstddef>
#include <functional>

namespace maivar::pipeline {

// Runs fn(i) for i in [0, n) on at most `jobs` threads (0 means 1). Work
// items are claimed in index order. If any call throws, remaining items
// are skipped and the exception from the lowest failing index is rethrown
// after all threads have joined.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace maivar::pipeline
