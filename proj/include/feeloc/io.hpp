#pragma once

// JSON and CSV serialization. Every rational travels as a string ("p/q",
// "p" or a decimal literal on input; canonical "p/q" or "p" on output) and
// +inf fees as "inf", so round trips are exact.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "feeloc/audit.hpp"
#include "feeloc/fee.hpp"
#include "feeloc/game.hpp"
#include "feeloc/mechanisms.hpp"
#include "feeloc/solvers.hpp"

namespace feeloc {

struct InstanceFile {
  EntranceFee fee = EntranceFee::constant(ExtRational(0));
  std::vector<Rational> agents;  // reported order
  size_t m = 1;
  Objective objective = Objective::kTotalCost;
};

// Throws Error(kParse) on malformed JSON or values, and the fee/profile
// validation errors for well-formed but invalid content.
InstanceFile parse_instance(std::string_view json_text);
std::string serialize_instance(const InstanceFile& instance);

// Throw Error(kIo) when the file cannot be read or written.
InstanceFile read_instance_file(const std::filesystem::path& path);
void write_instance_file(const std::filesystem::path& path,
                         const InstanceFile& instance);

std::string objective_name(Objective objective);  // "tc" | "mc"
Objective parse_objective(std::string_view name); // throws Error(kParse)

std::string solution_json(const Solution& solution, Objective objective);
std::string outcome_json(const std::string& mechanism, const Outcome& outcome,
                         const ExtRational& value, const ExtRational& ratio);
std::string violations_json(const std::string& mechanism,
                            const std::vector<Violation>& violations);
std::string report_json(const AuditReport& report);
std::string error_json(std::string_view kind, std::string_view message);

struct CsvRow {
  std::string family;
  std::string params;
  ExtRational r_e;
  std::string mechanism;
  Objective objective = Objective::kTotalCost;
  ExtRational ratio;
  ExtRational bound;
};

std::string csv_header();
// One line, newline-terminated; fields containing commas are quoted.
std::string csv_line(const CsvRow& row);

}  // namespace feeloc
