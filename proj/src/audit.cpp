#include "feeloc/audit.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "feeloc/error.hpp"
#include "feeloc/solvers.hpp"

namespace feeloc {

namespace {

void sort_unique(std::vector<Rational>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void check_grid(const DeviationGrid& grid, const AgentProfile& profile) {
  if (grid.per_agent.size() != profile.size()) {
    throw Error(ErrorKind::kBadParams, "deviation grid has " +
                                           std::to_string(grid.per_agent.size()) +
                                           " rows for " +
                                           std::to_string(profile.size()) + " agents");
  }
}

std::vector<ExtRational> member_costs(const EntranceFee& fee,
                                      const std::vector<Rational>& truth,
                                      const std::vector<size_t>& members,
                                      const Lottery& lottery) {
  std::vector<ExtRational> out;
  out.reserve(members.size());
  for (size_t i : members) out.push_back(expected_agent_cost(fee, truth[i], lottery));
  return out;
}

}  // namespace

DeviationGrid default_grid(const EntranceFee& fee, const AgentProfile& profile,
                           const std::vector<Rational>& offsets) {
  const auto& x = profile.positions();
  std::vector<Rational> common(x.begin(), x.end());
  common.insert(common.end(), fee.special_points().begin(),
                fee.special_points().end());
  for (size_t a = 0; a < x.size(); ++a) {
    for (size_t b = a + 1; b < x.size(); ++b) common.push_back((x[a] + x[b]) / 2);
  }
  for (const auto& p : x) {
    for (const auto& d : offsets) {
      common.push_back(p + d);
      common.push_back(p - d);
    }
  }
  sort_unique(common);
  return DeviationGrid{std::vector<std::vector<Rational>>(x.size(), common)};
}

DeviationGrid truthful_grid(const AgentProfile& profile) {
  DeviationGrid g;
  for (const auto& p : profile.reported()) g.per_agent.push_back({p});
  return g;
}

std::vector<Violation> check_sp(const Mechanism& mechanism,
                                const EntranceFee& fee,
                                const AgentProfile& profile,
                                const DeviationGrid& grid) {
  check_grid(grid, profile);
  const std::vector<Rational> truth = profile.reported();
  const Lottery base = as_lottery(mechanism.apply(fee, profile));
  std::vector<Violation> out;
  std::vector<Rational> report = truth;
  for (size_t i = 0; i < truth.size(); ++i) {
    const ExtRational before = expected_agent_cost(fee, truth[i], base);
    for (const auto& y : grid.per_agent[i]) {
      if (y == truth[i]) continue;
      report[i] = y;
      const Lottery moved = as_lottery(mechanism.apply(fee, std::span<const Rational>(report)));
      ExtRational after = expected_agent_cost(fee, truth[i], moved);
      if (after < before) {
        out.push_back({{i}, truth, {y}, {before}, {std::move(after)}});
      }
    }
    report[i] = truth[i];
  }
  return out;
}

std::vector<Violation> check_group_sp(const Mechanism& mechanism,
                                      const EntranceFee& fee,
                                      const AgentProfile& profile,
                                      const DeviationGrid& grid,
                                      size_t max_coalition,
                                      std::uint64_t limit) {
  check_grid(grid, profile);
  const std::vector<Rational> truth = profile.reported();
  const size_t n = truth.size();
  max_coalition = std::min(max_coalition, n);

  // Misreport options per agent, the true position excluded: a member that
  // reports truthfully is covered by the smaller coalition without it.
  std::vector<std::vector<Rational>> options(n);
  for (size_t i = 0; i < n; ++i) {
    for (const auto& y : grid.per_agent[i]) {
      if (y != truth[i]) options[i].push_back(y);
    }
  }

  std::vector<std::vector<size_t>> coalitions;
  std::uint64_t work = 0;
  for (size_t size = 1; size <= max_coalition; ++size) {
    std::vector<size_t> c(size);
    for (size_t k = 0; k < size; ++k) c[k] = k;
    while (true) {
      std::uint64_t combos = 1;
      for (size_t i : c) {
        combos *= options[i].size();
        if (combos > limit) break;
      }
      work += combos;
      if (work > limit) {
        throw Error(ErrorKind::kTooLarge,
                    "group deviation enumeration exceeds " + std::to_string(limit));
      }
      coalitions.push_back(c);
      size_t k = size;
      while (k > 0 && c[k - 1] == n - size + k - 1) --k;
      if (k == 0) break;
      ++c[k - 1];
      for (size_t t = k; t < size; ++t) c[t] = c[t - 1] + 1;
    }
  }

  const Lottery base = as_lottery(mechanism.apply(fee, profile));
  std::vector<ExtRational> before_all(n);
  for (size_t i = 0; i < n; ++i) before_all[i] = expected_agent_cost(fee, truth[i], base);

  std::vector<Violation> out;
  std::vector<Rational> report = truth;
  for (const auto& c : coalitions) {
    if (std::any_of(c.begin(), c.end(), [&](size_t i) { return options[i].empty(); })) {
      continue;
    }
    std::vector<size_t> digit(c.size(), 0);
    while (true) {
      for (size_t k = 0; k < c.size(); ++k) report[c[k]] = options[c[k]][digit[k]];
      const Lottery moved =
          as_lottery(mechanism.apply(fee, std::span<const Rational>(report)));
      bool all_gain = true;
      for (size_t i : c) {
        if (!(expected_agent_cost(fee, truth[i], moved) < before_all[i])) {
          all_gain = false;
          break;
        }
      }
      if (all_gain) {
        Violation v;
        v.coalition = c;
        v.truth = truth;
        for (size_t i : c) {
          v.misreport.push_back(report[i]);
          v.cost_before.push_back(before_all[i]);
        }
        v.cost_after = member_costs(fee, truth, c, moved);
        out.push_back(std::move(v));
      }
      size_t k = 0;
      while (k < c.size() && ++digit[k] == options[c[k]].size()) digit[k++] = 0;
      if (k == c.size()) break;
    }
    for (size_t i : c) report[i] = truth[i];
  }
  return out;
}

ExtRational approx_ratio(const Mechanism& mechanism, const EntranceFee& fee,
                         const AgentProfile& profile, Objective objective) {
  ExtRational achieved;
  try {
    achieved = expected_objective(fee, profile,
                                  as_lottery(mechanism.apply(fee, profile)),
                                  objective);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kInfeasible) throw;
    achieved = ExtRational::infinity();
  }
  const ExtRational optimum =
      solve_multi(fee, profile, mechanism.facilities(), objective).value;
  if (optimum.is_zero()) return achieved.is_zero() ? ExtRational(1) : ExtRational::infinity();
  if (achieved.is_infinite()) return ExtRational::infinity();
  return ExtRational(Rational(achieved.finite() / optimum.finite()));
}

ExtRational bound_value(BoundFormula formula, const ExtRational& r_e, size_t n) {
  // c - k/(r_e+1), which tends to c as r_e -> +inf.
  auto limit_form = [&](long c, long k) {
    if (r_e.is_infinite()) return ExtRational(c);
    return ExtRational(Rational(Rational(c) - Rational(k) / (r_e.finite() + 1)));
  };
  switch (formula) {
    case BoundFormula::kMedianTc:
      return limit_form(3, 4);
    case BoundFormula::kTwoPointTc:
      return limit_form(2, 2);
    case BoundFormula::kFirstAgentMc:
      if (r_e <= ExtRational(2)) return ExtRational(2);
      return limit_form(3, 3);
    case BoundFormula::kTwoFacilityTc:
      return ExtRational(std::max<long>(1, static_cast<long>(n) - 2));
    case BoundFormula::kOptimal:
      return ExtRational(1);
  }
  throw std::logic_error("unknown bound formula");
}

std::string bound_name(BoundFormula formula) {
  switch (formula) {
    case BoundFormula::kMedianTc: return "3-4/(r_e+1)";
    case BoundFormula::kTwoPointTc: return "2-2/(r_e+1)";
    case BoundFormula::kFirstAgentMc: return "2 if r_e<=2 else 3-3/(r_e+1)";
    case BoundFormula::kTwoFacilityTc: return "n-2";
    case BoundFormula::kOptimal: return "1";
  }
  throw std::logic_error("unknown bound formula");
}

namespace {

// Portable across standard libraries, unlike std::uniform_int_distribution.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  long between(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(rng_() % span);
  }
  bool coin() { return rng_() & 1u; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

Instance random_instance(std::uint64_t seed, const RandomParams& params) {
  if (params.n == 0 || params.fee_max < 0 || params.position_range <= 0) {
    throw Error(ErrorKind::kBadParams, "random instance parameters must be positive");
  }
  Draw draw(seed);
  const long fee_lo = params.allow_zero_fee ? 0 : 1;
  const long fee_hi = std::max(fee_lo, 2 * params.fee_max);
  auto fee_value = [&] { return make_rational(draw.between(fee_lo, fee_hi), 2); };
  auto position = [&] {
    return make_rational(draw.between(-4 * params.position_range,
                                      4 * params.position_range), 4);
  };

  const size_t specials =
      static_cast<size_t>(draw.between(0, static_cast<long>(params.max_breakpoints)));
  std::set<Rational> bp_at, ov_at;
  for (size_t s = 0; s < specials; ++s) {
    // Half-integer grid so special points sometimes coincide with agents.
    Rational at = make_rational(draw.between(-2 * params.position_range,
                                             2 * params.position_range), 2);
    (draw.coin() ? bp_at : ov_at).insert(std::move(at));
  }

  ExtRational def = fee_value();
  std::vector<FeePoint> bps;
  for (const auto& at : bp_at) bps.push_back({at, fee_value()});
  std::map<Rational, ExtRational> ovs;
  for (const auto& at : ov_at) ovs[at] = fee_value();

  // Lower semi-continuity: the value at each special point may not exceed
  // either one-sided limit.
  auto piece_fee = [&](const Rational& at, bool inclusive) -> const ExtRational& {
    const ExtRational* f = &def;
    for (const auto& b : bps) {
      if (inclusive ? b.at <= at : b.at < at) f = &b.fee;
    }
    return *f;
  };
  std::set<Rational> all(bp_at);
  all.insert(ov_at.begin(), ov_at.end());
  for (const auto& at : all) {
    const ExtRational& base = piece_fee(at, true);
    const ExtRational cap = min(piece_fee(at, false), base);
    auto it = ovs.find(at);
    if (it != ovs.end()) {
      if (cap < it->second) it->second = cap;
    } else if (cap < base) {
      ovs[at] = cap;
    }
  }
  std::vector<FeePoint> overrides;
  for (auto& [at, f] : ovs) overrides.push_back({at, f});

  const size_t n = params.random_n
                       ? static_cast<size_t>(draw.between(1, static_cast<long>(params.n)))
                       : params.n;
  std::vector<Rational> agents;
  for (size_t i = 0; i < n; ++i) agents.push_back(position());

  return Instance{"seed-" + std::to_string(seed),
                  EntranceFee(std::move(def), std::move(bps), std::move(overrides)),
                  AgentProfile(agents)};
}

std::vector<Instance> random_suite(std::uint64_t first_seed, size_t count,
                                   const RandomParams& params) {
  std::vector<Instance> out;
  out.reserve(count);
  for (size_t k = 0; k < count; ++k) out.push_back(random_instance(first_seed + k, params));
  return out;
}

int threads_from_env() {
  const char* raw = std::getenv("FEELOC_THREADS");
  if (raw == nullptr) return 1;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 256));
}

AuditReport eval_suite(const Mechanism& mechanism,
                       const std::vector<Instance>& instances,
                       Objective objective, BoundFormula formula, int threads) {
  if (threads <= 0) threads = threads_from_env();
  std::vector<InstanceResult> results(instances.size());

  auto run_one = [&](size_t k) {
    const Instance& inst = instances[k];
    InstanceResult r;
    r.id = inst.id;
    r.r_e = fee_extrema(inst.fee).r_e;
    r.ratio = approx_ratio(mechanism, inst.fee, inst.profile, objective);
    r.bound = bound_value(formula, r.r_e, inst.profile.size());
    r.within_bound = r.ratio <= r.bound;
    if (mechanism.kind() == Mechanism::Kind::kTwoPoint) {
      const TwoPointDetails d = two_point_details(inst.fee, inst.profile);
      r.k_fraction = make_rational(static_cast<long>(d.k),
                                   static_cast<long>(inst.profile.size()));
    }
    results[k] = std::move(r);
  };

  const size_t workers = std::min<size_t>(static_cast<size_t>(threads), instances.size());
  if (workers <= 1) {
    for (size_t k = 0; k < instances.size(); ++k) run_one(k);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (size_t k = next++; k < instances.size(); k = next++) run_one(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  AuditReport report;
  report.mechanism = mechanism.label();
  report.objective = objective;
  report.bound_formula = bound_name(formula);
  for (auto& r : results) {
    if (report.worst_instance.empty() || r.ratio > report.worst_ratio) {
      report.worst_ratio = r.ratio;
      report.worst_instance = r.id;
    }
    report.all_within_bound = report.all_within_bound && r.within_bound;
    if (r.k_fraction && *r.k_fraction < make_rational(1, 2)) ++report.low_k_instances;
  }
  report.instances = std::move(results);
  return report;
}

}  // namespace feeloc
