#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "feeloc/fee.hpp"
#include "feeloc/game.hpp"

namespace feeloc {

struct Solution {
  Placement placement;
  // 1-based inclusive ranges over the sorted profile; ranges[k] is served by
  // placement.locations[k]. When m > n the surplus facilities duplicate the
  // last location and have no range.
  std::vector<std::pair<size_t, size_t>> partition;
  // Objective of the placement with every agent choosing freely.
  ExtRational value;
};

// Single facility minimizing total cost, searched over [x_1*, x_n*] one
// inter-agent segment at a time. Ties: smaller fee, then rightmost.
Solution solve_one_tc(const EntranceFee& fee, const AgentProfile& profile);

// Single facility minimizing maximum cost; only agents 1 and n matter.
Solution solve_one_mc(const EntranceFee& fee, const AgentProfile& profile);

Solution solve_one(const EntranceFee& fee, const AgentProfile& profile,
                   Objective objective);

// One facility for sorted agents i..j (1-based, inclusive). Throws
// Error(kBadRange).
Solution group_opt(const EntranceFee& fee, const AgentProfile& profile,
                   size_t i, size_t j, Objective objective);

// Optimal m-facility placement by dynamic programming over contiguous
// groups of the sorted profile.
Solution solve_multi(const EntranceFee& fee, const AgentProfile& profile,
                     size_t m, Objective objective);

inline constexpr size_t kBruteForceLimit = 10;

// Independent oracle: every contiguous partition, each group solved by
// scanning every candidate location. Throws Error(kTooLarge) past `limit`.
Solution brute_force_opt(const EntranceFee& fee, const AgentProfile& profile,
                         size_t m, Objective objective,
                         size_t limit = kBruteForceLimit);

}  // namespace feeloc
