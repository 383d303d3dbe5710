#include <chrono>
#include <string>

#include "vgstein/errors.hpp"
#include "vgstein/simulate.hpp"

namespace vgstein::sim {

Accumulator simulate_serial(const KernelSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  Accumulator total(spec.hs.size());
  for (std::size_t b = 0; b < spec.block_count(); ++b) {
    if (spec.time_budget_seconds > 0.0) {
      const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - start;
      if (spent.count() > spec.time_budget_seconds) {
        throw PartialResultError("time budget exhausted after " + std::to_string(total.count) +
                                     " samples",
                                 total.count);
      }
    }
    total.merge(run_block(spec, b));
  }
  return total;
}

}  // namespace vgstein::sim
