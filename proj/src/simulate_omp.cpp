#include <omp.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <string>

#include "vgstein/errors.hpp"
#include "vgstein/simulate.hpp"

namespace vgstein::sim {

int resolve_threads(int requested) {
  int threads = requested > 0 ? requested : omp_get_max_threads();
  if (const char* env = std::getenv("VGSTEIN_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0 && cap < threads) threads = static_cast<int>(cap);
  }
  return threads < 1 ? 1 : threads;
}

Accumulator simulate_omp(const KernelSpec& spec, int threads) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto blocks = static_cast<long>(spec.block_count());
  std::vector<Accumulator> parts(blocks, Accumulator(spec.hs.size()));
  std::vector<char> done(blocks, 0);
  std::atomic<bool> out_of_time{false};

#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (long b = 0; b < blocks; ++b) {
    if (out_of_time.load(std::memory_order_relaxed)) continue;
    if (spec.time_budget_seconds > 0.0) {
      const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - start;
      if (spent.count() > spec.time_budget_seconds) {
        out_of_time.store(true, std::memory_order_relaxed);
        continue;
      }
    }
    parts[b] = run_block(spec, static_cast<std::size_t>(b));
    done[b] = 1;
  }

  Accumulator total(spec.hs.size());
  std::size_t finished = 0;
  for (long b = 0; b < blocks; ++b) {
    if (done[b]) finished += parts[b].count;
    total.merge(parts[b]);
  }
  if (out_of_time.load()) {
    throw PartialResultError("time budget exhausted after " + std::to_string(finished) + " samples",
                             finished);
  }
  return total;
}

}  // namespace vgstein::sim
