#pragma once
// Deterministic chunked parallel-for.  Each index writes only its own
// output slots and every per-index reduction uses a fixed order, so the
// result is identical for any worker count.

#include <functional>

namespace cliffop::par {

int max_threads();
void set_max_threads(int t);  // t <= 0 resets to hardware concurrency

// calls body(begin, end) on disjoint contiguous ranges covering [0, n)
void parallel_for(long long n,
                  const std::function<void(long long, long long)>& body);

}  // namespace cliffop::par
