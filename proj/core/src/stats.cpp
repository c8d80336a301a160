#include "accumsim/stats.hpp"

#include <array>
#include <utility>

namespace accumsim {

std::string SimStats::top_stall_cause() const {
  const std::array<std::pair<const char*, std::uint64_t>, 6> buckets{{
      {"atomic", stalls.atomic},
      {"bank_conflict", stalls.bank_conflict},
      {"reorder", stalls.reorder},
      {"scheduler", stalls.scheduler},
      {"crossbar", stalls.crossbar},
      {"dram", stalls.dram},
  }};
  const char* best = "none";
  std::uint64_t best_count = 0;
  for (const auto& [name, count] : buckets) {
    if (count > best_count) {
      best = name;
      best_count = count;
    }
  }
  return best;
}

}  // namespace accumsim
