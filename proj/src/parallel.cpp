#include "cliffop/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace cliffop::par {

namespace {
std::atomic<int> g_max_threads{0};  // 0 -> hardware concurrency
}

int max_threads() {
  int t = g_max_threads.load();
  if (t > 0) return t;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}

void set_max_threads(int t) { g_max_threads.store(t > 0 ? t : 0); }

void parallel_for(long long n,
                  const std::function<void(long long, long long)>& body) {
  if (n <= 0) return;
  int nt = std::min<long long>(max_threads(), n);
  if (nt <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  long long chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    long long b = t * chunk;
    long long e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace cliffop::par
