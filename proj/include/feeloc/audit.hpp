#pragma once

/**
 * Strategyproofness checks and approximation-ratio evaluation.
 *
 * Deviations are drawn from a finite grid, so check_sp / check_group_sp are
 * sound (every reported violation is real) but not complete.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "feeloc/fee.hpp"
#include "feeloc/game.hpp"
#include "feeloc/mechanisms.hpp"

namespace feeloc {

// Candidate misreports per agent, indexed by reported agent index.
struct DeviationGrid {
  std::vector<std::vector<Rational>> per_agent;
};

// Every agent may report: any agent position, any breakpoint or override,
// any pairwise midpoint of agent positions, and each agent position shifted
// by +-offset for each offset.
DeviationGrid default_grid(const EntranceFee& fee, const AgentProfile& profile,
                           const std::vector<Rational>& offsets = {Rational(1)});

// Only the true positions; no deviation is possible.
DeviationGrid truthful_grid(const AgentProfile& profile);

struct Violation {
  std::vector<size_t> coalition;       // reported indices, 0-based
  std::vector<Rational> truth;         // full true profile, reported order
  std::vector<Rational> misreport;     // one entry per coalition member
  std::vector<ExtRational> cost_before;
  std::vector<ExtRational> cost_after;
};

// Single-agent deviations that strictly lower the deviator's (expected) cost.
std::vector<Violation> check_sp(const Mechanism& mechanism,
                                const EntranceFee& fee,
                                const AgentProfile& profile,
                                const DeviationGrid& grid);

inline constexpr std::uint64_t kGroupCheckLimit = 5'000'000;

// Coalitions of size 1..max_coalition where every member strictly gains.
// Throws Error(kTooLarge) when the enumeration would exceed `limit`
// mechanism evaluations.
std::vector<Violation> check_group_sp(const Mechanism& mechanism,
                                      const EntranceFee& fee,
                                      const AgentProfile& profile,
                                      const DeviationGrid& grid,
                                      size_t max_coalition,
                                      std::uint64_t limit = kGroupCheckLimit);

// (Expected) objective of the mechanism over the optimum with the same
// number of facilities. 1 when both are 0; +inf when only the optimum is 0
// or the mechanism picks an all-infinite-fee placement.
ExtRational approx_ratio(const Mechanism& mechanism, const EntranceFee& fee,
                         const AgentProfile& profile, Objective objective);

// Upper bounds from the analysis, as functions of r_e and n.
enum class BoundFormula {
  kMedianTc,      // 3 - 4/(r_e+1)
  kTwoPointTc,    // 2 - 2/(r_e+1)
  kFirstAgentMc,  // 2 if r_e <= 2, else 3 - 3/(r_e+1)
  kTwoFacilityTc, // n - 2
  kOptimal,       // 1
};

ExtRational bound_value(BoundFormula formula, const ExtRational& r_e, size_t n);
std::string bound_name(BoundFormula formula);

struct Instance {
  std::string id;
  EntranceFee fee;
  AgentProfile profile;
};

struct RandomParams {
  size_t n = 4;
  size_t max_breakpoints = 5;   // breakpoints + overrides, at most
  long fee_max = 10;            // fees in [0, fee_max], step 1/2
  long position_range = 10;     // positions in [-range, range], step 1/4
  bool allow_zero_fee = true;
  bool random_n = true;         // n drawn uniformly from 1..n
};

// Deterministic in (seed, params); every output passes validation.
Instance random_instance(std::uint64_t seed, const RandomParams& params);

std::vector<Instance> random_suite(std::uint64_t first_seed, size_t count,
                                   const RandomParams& params);

struct InstanceResult {
  std::string id;
  ExtRational r_e;
  ExtRational ratio;
  ExtRational bound;
  bool within_bound = false;
  // Two-point mechanism only: k/n of the lottery.
  std::optional<Rational> k_fraction;
};

struct AuditReport {
  std::string mechanism;
  Objective objective = Objective::kTotalCost;
  std::string bound_formula;
  std::vector<InstanceResult> instances;
  ExtRational worst_ratio = ExtRational(1);
  std::string worst_instance;
  bool all_within_bound = true;
  size_t low_k_instances = 0;  // two-point instances with k/n < 1/2
  std::vector<Violation> violations;

  // Lower-bound audits only.
  std::optional<Rational> tolerance;
  bool ratio_witness = false;  // some profile has ratio >= bound - tolerance
  bool sp_witness = false;     // some deviation pair is a violation
  bool certified() const { return ratio_witness || sp_witness; }
};

// Ratios over the suite in parallel (threads <= 0 reads FEELOC_THREADS,
// default 1). Results are merged in instance order.
AuditReport eval_suite(const Mechanism& mechanism,
                       const std::vector<Instance>& instances,
                       Objective objective, BoundFormula formula,
                       int threads = 0);

int threads_from_env();

}  // namespace feeloc
