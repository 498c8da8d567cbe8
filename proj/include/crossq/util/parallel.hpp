#pragma once

#include <cstddef>
#include <functional>

namespace crossq {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into per-index slots and reduce
/// afterwards so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)> &body);

} // namespace crossq
