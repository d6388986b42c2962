#include "feeloc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "feeloc/audit.hpp"
#include "feeloc/error.hpp"
#include "feeloc/families.hpp"
#include "feeloc/io.hpp"
#include "feeloc/solvers.hpp"

namespace feeloc {

namespace {

struct MechanismFlags {
  std::string name;
  std::optional<size_t> i;
  std::optional<size_t> j;
};

void add_mechanism_flags(CLI::App* cmd, MechanismFlags& f) {
  cmd->add_option("--name", f.name, "mechanism")
      ->required()
      ->check(CLI::IsMember({"mi", "med", "mij", "trm", "mean", "opt"}));
  cmd->add_option("--i", f.i, "first agent index (1-based)")->check(CLI::PositiveNumber);
  cmd->add_option("--j", f.j, "second agent index (1-based)")->check(CLI::PositiveNumber);
}

Mechanism make_mechanism(const MechanismFlags& f, Objective objective, size_t m) {
  if (f.name == "mi") return Mechanism::opt_of_agent(f.i.value_or(1));
  if (f.name == "med") return Mechanism::opt_of_median();
  if (f.name == "mij") {
    if (!f.j) {
      if (f.i.value_or(1) != 1) {
        throw Error(ErrorKind::kBadParams, "mij with --i other than 1 needs --j");
      }
      return Mechanism::opt_of_extremes();
    }
    return Mechanism::opt_pair(f.i.value_or(1), *f.j);
  }
  if (f.name == "trm") return Mechanism::two_point();
  if (f.name == "mean") return Mechanism::mean();
  return Mechanism::optimal(objective, m);
}

// The proven upper bound for a mechanism/objective pair.
BoundFormula bound_for(const Mechanism& mech, Objective objective) {
  const bool tc = objective == Objective::kTotalCost;
  if (mech.kind() == Mechanism::Kind::kOptimal) return BoundFormula::kOptimal;
  if (mech.kind() == Mechanism::Kind::kOptOfMedian && tc) return BoundFormula::kMedianTc;
  if (mech.kind() == Mechanism::Kind::kTwoPoint && tc) return BoundFormula::kTwoPointTc;
  if (mech.label() == "m1" && !tc) return BoundFormula::kFirstAgentMc;
  if (mech.label() == "m1,n") {
    return tc ? BoundFormula::kTwoFacilityTc : BoundFormula::kFirstAgentMc;
  }
  throw Error(ErrorKind::kBadParams, "no upper bound known for " + mech.label() +
                                         " under " + objective_name(objective));
}

ExtRational outcome_value(const EntranceFee& fee, const AgentProfile& profile,
                          const Outcome& outcome, Objective objective) {
  try {
    return expected_objective(fee, profile, as_lottery(outcome), objective);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kInfeasible) throw;
    return ExtRational::infinity();
  }
}

std::string file_stem(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

InstanceFile family_file(const FamilyInstance& fam, size_t k) {
  InstanceFile f;
  f.fee = fam.fee;
  f.agents = fam.profiles[k];
  f.m = fam.facilities;
  f.objective = fam.objective;
  return f;
}

std::vector<Instance> family_instances(const FamilyInstance& fam) {
  std::vector<Instance> out;
  for (size_t k = 0; k < fam.profiles.size(); ++k) {
    out.push_back({fam.profile_ids[k], fam.fee, AgentProfile(fam.profiles[k])});
  }
  return out;
}

// ---------------------------------------------------------------- reproduce

struct TableWriter {
  std::ostream& out;

  void row(const std::string& family, const std::string& params,
           const EntranceFee& fee, const std::vector<Rational>& agents,
           const Mechanism& mech, Objective objective, const ExtRational& bound) {
    const AgentProfile profile(agents);
    out << csv_line({family, params, fee_extrema(fee).r_e, mech.label(), objective,
                     approx_ratio(mech, fee, profile, objective), bound});
  }

  // Bound column: the mechanism's proven upper bound, also for lower-bound
  // families, so within_bound has one meaning across the table.
  void family(FamilyId id, const std::string& params, const Mechanism& mech) {
    const FamilyInstance fam = gen_instance(id, parse_params(params));
    const BoundFormula formula = bound_for(mech, fam.objective);
    for (size_t k = 0; k < fam.profiles.size(); ++k) {
      row(family_name(id), fam.params + ",profile=" + fam.profile_ids[k], fam.fee,
          fam.profiles[k], mech, fam.objective,
          bound_value(formula, fee_extrema(fam.fee).r_e, fam.profiles[k].size()));
    }
  }

  // The random-suite instance furthest past its bound if any exceeds it,
  // otherwise the one with the largest ratio.
  void random(const Mechanism& mech, Objective objective, BoundFormula formula,
              std::uint64_t seed, size_t count, const RandomParams& params) {
    const std::vector<Instance> suite = random_suite(seed, count, params);
    const AuditReport rep = eval_suite(mech, suite, objective, formula);
    size_t pick = 0;
    std::optional<Rational> worst_excess;
    for (size_t k = 0; k < rep.instances.size(); ++k) {
      const auto& r = rep.instances[k];
      if (r.within_bound) continue;
      if (r.ratio.is_infinite()) {
        pick = k;
        break;
      }
      Rational excess = r.ratio.finite() - r.bound.finite();
      if (!worst_excess || excess > *worst_excess) {
        worst_excess = std::move(excess);
        pick = k;
      }
    }
    if (rep.all_within_bound) {
      for (size_t k = 0; k < rep.instances.size(); ++k) {
        if (rep.instances[k].ratio > rep.instances[pick].ratio) pick = k;
      }
    }
    const auto& r = rep.instances[pick];
    const Instance& inst = suite[pick];
    out << csv_line({"RANDOM",
                     "seed=" + std::to_string(seed) + ",count=" + std::to_string(count) +
                         ",n=" + std::to_string(params.n) + ",instance=" + inst.id,
                     r.r_e, mech.label(), objective, r.ratio, r.bound});
  }
};

void reproduce(const std::string& table, std::uint64_t seed, size_t count,
               std::ostream& out) {
  TableWriter w{out};
  RandomParams params;
  params.n = 6;
  out << csv_header();
  const Mechanism med = Mechanism::opt_of_median();
  const Mechanism trm = Mechanism::two_point();
  const Mechanism m1 = Mechanism::opt_of_agent(1);
  const Mechanism m1n = Mechanism::opt_of_extremes();
  if (table == "tc-bounds") {
    w.family(FamilyId::kTcTightMed, "e_min=1,e_max=4,delta=1", med);
    w.family(FamilyId::kTcTightMed, "e_min=1,e_max=4,delta=1/100", med);
    w.family(FamilyId::kTcTightMed, "e_min=1,e_max=4,L=4", trm);
    w.family(FamilyId::kTcLbDet, "d=1,eps=1/100", med);
    w.family(FamilyId::kTcLbRand, "eps=1/100", trm);
    w.random(med, Objective::kTotalCost, BoundFormula::kMedianTc, seed, count, params);
    w.random(trm, Objective::kTotalCost, BoundFormula::kTwoPointTc, seed, count, params);
  } else if (table == "mc-bounds") {
    w.family(FamilyId::kMcTightM1, "e_min=1,e_max=4", m1);
    w.family(FamilyId::kMcTightM1, "e_min=1,e_max=3", m1);
    for (const char* c : {"0", "1/100"}) {
      const EntranceFee fee = EntranceFee::constant(parse_ext(c));
      w.row("CONSTANT_FEE", std::string("c=") + c + ",profile=x", fee,
            {Rational(0), Rational(1)}, m1, Objective::kMaxCost, ExtRational(2));
    }
    w.family(FamilyId::kMcLb3, "d=1,eps=1/100", m1);
    w.family(FamilyId::kMcLb2, "alpha=3,eps=1/100,steps=3", m1);
    w.family(FamilyId::kMcLbRand, "eps=1/100", m1);
    w.random(m1, Objective::kMaxCost, BoundFormula::kFirstAgentMc, seed, count, params);
    w.random(m1n, Objective::kMaxCost, BoundFormula::kFirstAgentMc, seed, count, params);
  } else {
    w.family(FamilyId::kTwoFacTc, "n=5,e_min=1,e_max=2,L=10000", m1n);
    w.family(FamilyId::kTwoFacTc, "n=5,e_min=1,e_max=2,L=1000000", m1n);
    w.family(FamilyId::kTwoFacLb, "base=MC_LB_3,d=1,eps=1/100", m1n);
    w.family(FamilyId::kTwoFacLb, "base=MC_LB_RAND,eps=1/100", m1n);
    w.random(m1n, Objective::kTotalCost, BoundFormula::kTwoFacilityTc, seed, count, params);
    w.random(m1n, Objective::kMaxCost, BoundFormula::kFirstAgentMc, seed, count, params);
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Facility location with entrance fees: solvers, mechanisms, audits"};
  app.require_subcommand(1);

  std::string instance_path;
  std::optional<size_t> m_flag;
  std::optional<std::string> objective_flag;
  MechanismFlags mech_flags;

  auto* solve = app.add_subcommand("solve", "optimal placement for an instance");
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--m", m_flag)->check(CLI::PositiveNumber);
  solve->add_option("--objective", objective_flag)->check(CLI::IsMember({"tc", "mc"}));

  bool sample = false;
  std::uint64_t seed = 1;
  auto* mech = app.add_subcommand("mech", "run a mechanism on an instance");
  add_mechanism_flags(mech, mech_flags);
  mech->add_option("--instance", instance_path)->required();
  mech->add_option("--objective", objective_flag)->check(CLI::IsMember({"tc", "mc"}));
  mech->add_flag("--sample", sample, "draw one placement from a randomized outcome");
  mech->add_option("--seed", seed, "seed for --sample");

  std::optional<size_t> group;
  auto* audit = app.add_subcommand("audit-sp", "search a deviation grid for violations");
  add_mechanism_flags(audit, mech_flags);
  audit->add_option("--instance", instance_path)->required();
  audit->add_option("--group", group, "largest coalition to try")->check(CLI::PositiveNumber);

  std::string suite, family_id, params_text, format = "json";
  size_t count = 200, n_max = 4;
  std::optional<std::string> tolerance_text;
  auto* eval = app.add_subcommand("eval", "approximation ratios over a suite");
  add_mechanism_flags(eval, mech_flags);
  eval->add_option("--suite", suite)->required()->check(CLI::IsMember({"random", "family"}));
  eval->add_option("--seed", seed);
  eval->add_option("--count", count);
  eval->add_option("--n", n_max, "largest profile size in the random suite")
      ->check(CLI::PositiveNumber);
  eval->add_option("--family", family_id);
  eval->add_option("--params", params_text);
  eval->add_option("--objective", objective_flag)->check(CLI::IsMember({"tc", "mc"}));
  eval->add_option("--tolerance", tolerance_text, "lower-bound families only");
  eval->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  std::string out_dir;
  auto* gen = app.add_subcommand("gen", "instance files for a family");
  gen->add_option("--family", family_id)->required();
  gen->add_option("--params", params_text);
  gen->add_option("--out-dir", out_dir);

  std::string table;
  auto* repro = app.add_subcommand("reproduce", "CSV tables of the bound checks");
  repro->add_option("--table", table)
      ->required()
      ->check(CLI::IsMember({"tc-bounds", "mc-bounds", "two-facility"}));
  repro->add_option("--seed", seed);
  repro->add_option("--count", count);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) {
      const InstanceFile f = read_instance_file(instance_path);
      const Objective obj = objective_flag ? parse_objective(*objective_flag) : f.objective;
      const size_t m = m_flag.value_or(f.m);
      out << solution_json(solve_multi(f.fee, AgentProfile(f.agents), m, obj), obj);
    } else if (*mech) {
      const InstanceFile f = read_instance_file(instance_path);
      const Objective obj = objective_flag ? parse_objective(*objective_flag) : f.objective;
      const Mechanism mechanism = make_mechanism(mech_flags, obj, f.m);
      const AgentProfile profile(f.agents);
      Outcome outcome = mechanism.apply(f.fee, profile);
      std::string label = mechanism.label();
      if (sample && std::holds_alternative<Lottery>(outcome)) {
        // Exact draw: u is uniform on multiples of 2^-32 in [0, 1).
        std::mt19937_64 rng(seed);
        Rational u(mpz_class(static_cast<unsigned long>(rng() >> 32)), mpz_class(1) << 32);
        u.canonicalize();
        const Lottery lottery = std::get<Lottery>(outcome);
        Rational acc;
        Placement chosen = lottery.support.back().first;
        for (const auto& [placement, p] : lottery.support) {
          acc += p;
          if (u < acc) {
            chosen = placement;
            break;
          }
        }
        outcome = chosen;
        label += " sample";
      }
      const ExtRational value = outcome_value(f.fee, profile, outcome, obj);
      const ExtRational opt = solve_multi(f.fee, profile, mechanism.facilities(), obj).value;
      ExtRational ratio;
      if (opt.is_zero()) {
        ratio = value.is_zero() ? ExtRational(1) : ExtRational::infinity();
      } else {
        ratio = value / opt;
      }
      out << outcome_json(label, outcome, value, ratio);
    } else if (*audit) {
      const InstanceFile f = read_instance_file(instance_path);
      const Mechanism mechanism = make_mechanism(mech_flags, f.objective, f.m);
      const AgentProfile profile(f.agents);
      const DeviationGrid grid = default_grid(f.fee, profile);
      const auto violations =
          group ? check_group_sp(mechanism, f.fee, profile, grid, *group)
                : check_sp(mechanism, f.fee, profile, grid);
      out << violations_json(mechanism.label(), violations);
    } else if (*eval) {
      AuditReport report;
      std::vector<CsvRow> rows;
      if (suite == "random") {
        const Objective obj = objective_flag ? parse_objective(*objective_flag)
                                             : Objective::kTotalCost;
        const Mechanism mechanism = make_mechanism(mech_flags, obj, 1);
        RandomParams rp;
        rp.n = n_max;
        const auto instances = random_suite(seed, count, rp);
        report = eval_suite(mechanism, instances, obj, bound_for(mechanism, obj));
        for (const auto& r : report.instances) {
          rows.push_back({"RANDOM", "instance=" + r.id, r.r_e, mechanism.label(), obj,
                          r.ratio, r.bound});
        }
      } else {
        if (family_id.empty()) {
          throw Error(ErrorKind::kBadParams, "--suite family needs --family");
        }
        const FamilyInstance fam =
            gen_instance(parse_family(family_id), parse_params(params_text));
        if (objective_flag && parse_objective(*objective_flag) != fam.objective) {
          throw Error(ErrorKind::kBadParams, family_id + " is a " +
                                                 objective_name(fam.objective) +
                                                 " family");
        }
        const Mechanism mechanism = make_mechanism(mech_flags, fam.objective, fam.facilities);
        if (fam.lower_bound) {
          std::optional<Rational> tol;
          if (tolerance_text) tol = parse_rational(*tolerance_text);
          report = audit_lower_bound(mechanism, fam, tol);
        } else {
          report = eval_suite(mechanism, family_instances(fam), fam.objective,
                              bound_for(mechanism, fam.objective));
        }
        for (const auto& r : report.instances) {
          rows.push_back({family_name(fam.id), fam.params + ",profile=" + r.id, r.r_e,
                          mechanism.label(), fam.objective, r.ratio, r.bound});
        }
      }
      if (format == "csv") {
        out << csv_header();
        for (const auto& row : rows) out << csv_line(row);
      } else {
        out << report_json(report);
      }
    } else if (*gen) {
      const FamilyInstance fam =
          gen_instance(parse_family(family_id), parse_params(params_text));
      nlohmann::ordered_json summary;
      summary["family"] = family_name(fam.id);
      summary["params"] = fam.params;
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        nlohmann::ordered_json files = nlohmann::ordered_json::array();
        for (size_t k = 0; k < fam.profiles.size(); ++k) {
          const auto path = std::filesystem::path(out_dir) /
                            (family_name(fam.id) + "_" + file_stem(fam.profile_ids[k]) + ".json");
          write_instance_file(path, family_file(fam, k));
          files.push_back(path.string());
        }
        summary["files"] = files;
      } else {
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (size_t k = 0; k < fam.profiles.size(); ++k) {
          list.push_back({{"id", fam.profile_ids[k]},
                          {"instance", nlohmann::ordered_json::parse(
                                           serialize_instance(family_file(fam, k)))}});
        }
        summary["instances"] = list;
      }
      out << summary.dump(2) << "\n";
    } else if (*repro) {
      reproduce(table, seed, count, out);
    }
  } catch (const Error& e) {
    err << error_json(error_kind_name(e.kind()), e.what());
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << error_json(error_kind_name(ErrorKind::kIo), e.what());
    return 1;
  }
  return 0;
}

}  // namespace feeloc
