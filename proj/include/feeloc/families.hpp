#pragma once

/**
 * Parametrized instance families: tight examples for the upper bounds and
 * the constructions behind the lower bounds.
 *
 * Lower-bound families come with a deviation structure: any two of their
 * profiles that differ in exactly one coordinate form a deviation pair.
 */

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feeloc/audit.hpp"

namespace feeloc {

enum class FamilyId {
  kTcTightMed,   // median mechanism, total cost
  kMcTightM1,    // first-agent mechanism, maximum cost
  kTcLbDet,      // deterministic, total cost
  kTcLbRand,     // randomized, total cost
  kMcLb2,        // deterministic, maximum cost, bound 2
  kMcLb3,        // deterministic, maximum cost, r_e > 2
  kMcLbRand,     // randomized, maximum cost
  kTwoFacTc,     // m_{1,n}, total cost
  kTwoFacLb,     // a maximum-cost lower-bound family plus a far anchor agent
};

std::string family_name(FamilyId id);
// Accepts the names returned by family_name. Throws Error(kBadParams).
FamilyId parse_family(std::string_view name);
std::vector<FamilyId> all_families();

// key -> raw value, e.g. {"d": "1", "eps": "1/100"}.
using FamilyParams = std::map<std::string, std::string>;

// Parses "d=1,eps=1/100". Throws Error(kParse).
FamilyParams parse_params(std::string_view text);

struct FamilyInstance {
  FamilyId id;
  // Every effective parameter, defaults included, as "k=v,..." sorted by key.
  std::string params;
  EntranceFee fee;
  std::vector<std::string> profile_ids;
  std::vector<std::vector<Rational>> profiles;  // reported order
  Objective objective;
  size_t facilities;
  // The bound the family is tight for (tight families) or certifies
  // (lower-bound families), in the limit of its parameter.
  ExtRational bound;
  // Lower-bound families: bound minus the ratio the construction forces at
  // the given finite parameters. Zero for tight families.
  Rational tolerance;
  bool lower_bound = false;
  // Profiles end in (0, x); the audit adds (0, y) for facilities y in (0, x).
  bool adaptive_tail = false;
};

// Unknown keys or values violating the family's constraints throw
// Error(kBadParams).
FamilyInstance gen_instance(FamilyId id, const FamilyParams& params = {});

// Certifies, for the given mechanism, either a profile whose ratio is at
// least bound - tolerance or a strategyproofness violation among the
// family's deviation pairs. The maximum-cost family with bound 2 also adds
// the profiles (0, y) for every facility y the mechanism places strictly
// inside (0, x). Throws Error(kBadParams) for tight families or when the
// mechanism's facility count does not match.
AuditReport audit_lower_bound(const Mechanism& mechanism,
                              const FamilyInstance& family,
                              std::optional<Rational> tolerance = std::nullopt);

}  // namespace feeloc
