#include "feeloc/families.hpp"

#include <algorithm>
#include <set>

#include "feeloc/error.hpp"

namespace feeloc {

namespace {

struct FamilyName {
  FamilyId id;
  const char* name;
};

constexpr FamilyName kNames[] = {
    {FamilyId::kTcTightMed, "TC_TIGHT_MED"}, {FamilyId::kMcTightM1, "MC_TIGHT_M1"},
    {FamilyId::kTcLbDet, "TC_LB_DET"},       {FamilyId::kTcLbRand, "TC_LB_RAND"},
    {FamilyId::kMcLb2, "MC_LB_2"},           {FamilyId::kMcLb3, "MC_LB_3"},
    {FamilyId::kMcLbRand, "MC_LB_RAND"},     {FamilyId::kTwoFacTc, "TWO_FAC_TC"},
    {FamilyId::kTwoFacLb, "TWO_FAC_LB"},
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::kBadParams, what);
}

// Reads parameters with defaults and records the effective values; keys
// that were never read are rejected by finish().
class ParamReader {
 public:
  explicit ParamReader(const FamilyParams& raw) : raw_(raw) {}

  Rational rational(const std::string& key, std::string_view fallback) {
    Rational v = parse_rational(lookup(key, fallback));
    effective_[key] = to_string(v);
    return v;
  }

  long integer(const std::string& key, long fallback) {
    const Rational v = rational(key, std::to_string(fallback));
    require(v.get_den() == 1 && v.get_num().fits_slong_p(), key + " must be an integer");
    return v.get_num().get_si();
  }

  std::string text(const std::string& key, std::string_view fallback) {
    std::string v = lookup(key, fallback);
    effective_[key] = v;
    return v;
  }

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  void finish() const {
    for (const auto& [k, v] : raw_) {
      require(used_.count(k) > 0, "unknown parameter '" + k + "'");
    }
  }

  std::map<std::string, std::string>& effective() { return effective_; }

 private:
  std::string lookup(const std::string& key, std::string_view fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? std::string(fallback) : it->second;
  }

  const FamilyParams& raw_;
  std::set<std::string> used_;
  std::map<std::string, std::string> effective_;
};

std::string join(const std::map<std::string, std::string>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ',';
    out += k + '=' + v;
  }
  return out;
}

EntranceFee two_level(const ExtRational& outside, const std::vector<Rational>& at,
                      const ExtRational& inside) {
  std::vector<FeePoint> ov;
  for (const auto& p : at) ov.push_back({p, inside});
  std::sort(ov.begin(), ov.end(),
            [](const FeePoint& a, const FeePoint& b) { return a.at < b.at; });
  return EntranceFee(outside, {}, std::move(ov));
}

Rational eps_param(ParamReader& r) {
  Rational eps = r.rational("eps", "1/100");
  require(eps > 0 && eps < 1, "eps must lie in (0, 1)");
  return eps;
}

void three_profiles(FamilyInstance& f, std::vector<Rational> x1,
                    std::vector<Rational> x2, std::vector<Rational> x3) {
  f.profile_ids = {"x1", "x2", "x3"};
  f.profiles = {std::move(x1), std::move(x2), std::move(x3)};
}

ExtRational ratio_bound(BoundFormula formula, const EntranceFee& fee, size_t n) {
  return bound_value(formula, fee_extrema(fee).r_e, n);
}

Rational finite_gap(const ExtRational& bound, const Rational& forced) {
  return Rational(bound.finite() - forced);
}

FamilyInstance base_instance(FamilyId id, ParamReader& r) {
  const Rational one(1);
  switch (id) {
    case FamilyId::kTcTightMed: {
      const Rational e_min = r.rational("e_min", "1");
      const Rational e_max = r.rational("e_max", "4");
      const long n = r.integer("n", 2);
      require(e_min >= 0 && e_max >= e_min, "need 0 <= e_min <= e_max");
      require(n >= 2 && n % 2 == 0, "n must be even and at least 2");
      require(!(r.has("L") && r.has("delta")), "give L or delta, not both");
      Rational L;
      if (r.has("L")) {
        L = r.rational("L", "0");
      } else {
        L = e_max - e_min + r.rational("delta", "1/100");
      }
      require(L > e_max - e_min && L > 0, "need L > e_max - e_min");
      FamilyInstance f{id, "", two_level(e_max, {L}, e_min), {}, {},
                       Objective::kTotalCost, 1, {}, {}};
      std::vector<Rational> x(static_cast<size_t>(n / 2), Rational(0));
      x.insert(x.end(), static_cast<size_t>(n / 2), L);
      f.profile_ids = {"x"};
      f.profiles = {x};
      f.bound = ratio_bound(BoundFormula::kMedianTc, f.fee, x.size());
      return f;
    }
    case FamilyId::kMcTightM1: {
      const Rational e_min = r.rational("e_min", "1");
      const Rational e_max = r.rational("e_max", "4");
      require(e_min > 0 && e_max > 2 * e_min, "need e_max > 2 e_min > 0");
      FamilyInstance f{id, "", two_level(e_max, {e_max}, e_min), {}, {},
                       Objective::kMaxCost, 1, {}, {}};
      f.profile_ids = {"x"};
      f.profiles = {{Rational(0), Rational(2 * e_max)}};
      f.bound = ratio_bound(BoundFormula::kFirstAgentMc, f.fee, 2);
      return f;
    }
    case FamilyId::kTcLbDet: {
      const Rational d = r.rational("d", "1");
      const Rational eps = eps_param(r);
      require(d >= 0, "need d >= 0");
      FamilyInstance f{id, "", two_level(Rational(d + 1), {-one, one}, d), {}, {},
                       Objective::kTotalCost, 1, {}, {}, true};
      three_profiles(f, {-one, eps}, {Rational(-eps), one}, {-one, one});
      f.bound = ratio_bound(BoundFormula::kMedianTc, f.fee, 2);
      f.tolerance = finite_gap(f.bound, Rational((2 * d + 3 - eps) / (2 * d + 1 + eps)));
      return f;
    }
    case FamilyId::kTcLbRand: {
      const Rational eps = eps_param(r);
      FamilyInstance f{id, "", two_level(ExtRational::infinity(), {-one, one}, 0),
                       {}, {}, Objective::kTotalCost, 1, {}, {}, true};
      three_profiles(f, {-one, eps}, {Rational(-eps), one}, {-one, one});
      f.bound = ExtRational(2);
      f.tolerance = finite_gap(f.bound, Rational(2 / (1 + eps)));
      return f;
    }
    case FamilyId::kMcLb2: {
      const Rational alpha = r.rational("alpha", "3");
      const Rational eps = eps_param(r);
      const long steps = r.integer("steps", 10);
      require(alpha >= 1, "need alpha >= 1");
      require(steps >= 1 && steps <= 60, "steps must lie in 1..60");
      FamilyInstance f{id, "", two_level(alpha, {Rational(1 - alpha)}, 1), {}, {},
                       Objective::kMaxCost, 1, {}, {}, true, true};
      // Beyond this length a facility at 0 or x already costs ratio > 2 - eps.
      const Rational l_eps = 2 * (1 / eps - 1) * alpha;
      Rational x = l_eps;
      for (long t = 1; t <= steps; ++t) {
        x *= 2;
        f.profile_ids.push_back("x=" + to_string(x));
        f.profiles.push_back({Rational(0), x});
      }
      f.bound = ExtRational(2);
      f.tolerance = eps;
      return f;
    }
    case FamilyId::kMcLb3: {
      const Rational d = r.rational("d", "1");
      const Rational eps = eps_param(r);
      require(d > -2, "need d > -2");
      FamilyInstance f{id, "", two_level(Rational(d + 4), {-one, one}, Rational(d + 2)),
                       {}, {}, Objective::kMaxCost, 1, {}, {}, true};
      three_profiles(f, {Rational(-eps), Rational(2)}, {Rational(-2), eps},
                     {Rational(-2), Rational(2)});
      f.bound = ratio_bound(BoundFormula::kMedianTc, f.fee, 2);
      f.tolerance = finite_gap(f.bound, Rational((d + 5) / (d + 3 + eps)));
      return f;
    }
    case FamilyId::kMcLbRand: {
      const Rational eps = eps_param(r);
      FamilyInstance f{id, "", two_level(ExtRational::infinity(), {-one, one}, 0),
                       {}, {}, Objective::kMaxCost, 1, {}, {}, true};
      three_profiles(f, {Rational(-eps), Rational(2)}, {Rational(-2), eps},
                     {Rational(-2), Rational(2)});
      f.bound = ExtRational(2);
      f.tolerance = finite_gap(f.bound, Rational((4 + eps) / (2 * (1 + eps))));
      return f;
    }
    case FamilyId::kTwoFacTc: {
      const long n = r.integer("n", 5);
      const Rational e_min = r.rational("e_min", "1");
      const Rational e_max = r.rational("e_max", "2");
      const Rational L = r.rational("L", "10000");
      require(n >= 3, "need n >= 3");
      require(e_min >= 0 && e_max >= e_min, "need 0 <= e_min <= e_max");
      require(L / 2 > e_max - e_min, "need L/2 > e_max - e_min");
      const Rational mid = L / 2;
      FamilyInstance f{id, "", two_level(e_max, {mid}, e_min), {}, {},
                       Objective::kTotalCost, 2, {}, {}};
      std::vector<Rational> x{Rational(0)};
      x.insert(x.end(), static_cast<size_t>(n - 2), mid);
      x.push_back(L);
      f.profile_ids = {"x"};
      f.profiles = {x};
      f.bound = bound_value(BoundFormula::kTwoFacilityTc, ExtRational(1),
                            static_cast<size_t>(n));
      return f;
    }
    case FamilyId::kTwoFacLb: {
      const FamilyId base_id = parse_family(r.text("base", "MC_LB_3"));
      require(base_id == FamilyId::kMcLb2 || base_id == FamilyId::kMcLb3 ||
                  base_id == FamilyId::kMcLbRand,
              "base must be MC_LB_2, MC_LB_3 or MC_LB_RAND");
      const Rational scale = r.rational("scale", "1000000");
      require(scale >= 1, "need scale >= 1");
      FamilyInstance f = base_instance(base_id, r);
      f.id = id;
      f.facilities = 2;

      Rational lo = f.profiles.front().front(), hi = lo;
      for (const auto& p : f.profiles) {
        for (const auto& x : p) {
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
      }
      const Rational anchor = lo - scale * (hi - lo);
      // The anchor sits left of every special point, where the fee is the
      // default, so a cheaper override there keeps lower semi-continuity.
      std::vector<FeePoint> ov{{anchor, fee_extrema(f.fee).e_min}};
      ov.insert(ov.end(), f.fee.overrides().begin(), f.fee.overrides().end());
      f.fee = EntranceFee(f.fee.default_fee(), f.fee.breakpoints(), std::move(ov));
      for (auto& p : f.profiles) p.insert(p.begin(), anchor);
      return f;
    }
  }
  throw std::logic_error("unknown family");
}

}  // namespace

std::string family_name(FamilyId id) {
  for (const auto& n : kNames) {
    if (n.id == id) return n.name;
  }
  throw std::logic_error("unknown family");
}

FamilyId parse_family(std::string_view name) {
  for (const auto& n : kNames) {
    if (name == n.name) return n.id;
  }
  throw Error(ErrorKind::kBadParams, "unknown family '" + std::string(name) + "'");
}

std::vector<FamilyId> all_families() {
  std::vector<FamilyId> out;
  for (const auto& n : kNames) out.push_back(n.id);
  return out;
}

FamilyParams parse_params(std::string_view text) {
  FamilyParams out;
  while (!text.empty()) {
    const size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size()) {
      throw Error(ErrorKind::kParse, "expected key=value, got '" + std::string(item) + "'");
    }
    const std::string key(item.substr(0, eq));
    if (!out.emplace(key, std::string(item.substr(eq + 1))).second) {
      throw Error(ErrorKind::kParse, "parameter '" + key + "' given twice");
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) throw Error(ErrorKind::kParse, "trailing comma in parameters");
  }
  return out;
}

FamilyInstance gen_instance(FamilyId id, const FamilyParams& params) {
  ParamReader reader(params);
  FamilyInstance f = base_instance(id, reader);
  reader.finish();
  f.params = join(reader.effective());
  return f;
}

AuditReport audit_lower_bound(const Mechanism& mechanism,
                              const FamilyInstance& family,
                              std::optional<Rational> tolerance) {
  require(family.lower_bound,
          family_name(family.id) + " is not a lower-bound family");
  require(mechanism.facilities() == family.facilities,
          family_name(family.id) + " needs a " + std::to_string(family.facilities) +
              "-facility mechanism");
  const Rational tol = tolerance.value_or(family.tolerance);

  std::vector<std::string> ids = family.profile_ids;
  std::vector<std::vector<Rational>> profiles = family.profiles;
  std::vector<Lottery> outcomes;
  for (const auto& p : profiles) {
    outcomes.push_back(as_lottery(mechanism.apply(family.fee, std::span<const Rational>(p))));
  }

  if (family.adaptive_tail) {
    const size_t base_count = profiles.size();
    for (size_t k = 0; k < base_count; ++k) {
      const Rational& x = profiles[k].back();
      std::set<Rational> inside;
      for (const auto& [placement, prob] : outcomes[k].support) {
        for (const auto& y : placement.locations) {
          if (sgn(prob) > 0 && y > 0 && y < x) inside.insert(y);
        }
      }
      for (const auto& y : inside) {
        std::vector<Rational> p = profiles[k];
        p.back() = y;
        if (std::find(profiles.begin(), profiles.end(), p) != profiles.end()) continue;
        ids.push_back("y=" + to_string(y) + " from " + ids[k]);
        outcomes.push_back(as_lottery(mechanism.apply(family.fee, std::span<const Rational>(p))));
        profiles.push_back(std::move(p));
      }
    }
  }

  AuditReport report;
  report.mechanism = mechanism.label();
  report.objective = family.objective;
  report.bound_formula = to_string(family.bound);
  report.tolerance = tol;
  const ExtRational r_e = fee_extrema(family.fee).r_e;
  const ExtRational threshold = family.bound - tol;

  for (size_t k = 0; k < profiles.size(); ++k) {
    InstanceResult r;
    r.id = ids[k];
    r.r_e = r_e;
    r.ratio = approx_ratio(mechanism, family.fee, AgentProfile(profiles[k]),
                           family.objective);
    r.bound = family.bound;
    r.within_bound = r.ratio <= r.bound;
    report.ratio_witness = report.ratio_witness || r.ratio >= threshold;
    if (k == 0 || r.ratio > report.worst_ratio) {
      report.worst_ratio = r.ratio;
      report.worst_instance = r.id;
    }
    report.all_within_bound = report.all_within_bound && r.within_bound;
    report.instances.push_back(std::move(r));
  }

  // Deviation pairs: truth `a`, one agent reporting its coordinate of `b`.
  for (size_t a = 0; a < profiles.size(); ++a) {
    for (size_t b = 0; b < profiles.size(); ++b) {
      if (a == b || profiles[a].size() != profiles[b].size()) continue;
      size_t differing = 0, at = 0;
      for (size_t i = 0; i < profiles[a].size(); ++i) {
        if (profiles[a][i] != profiles[b][i]) {
          ++differing;
          at = i;
        }
      }
      if (differing != 1) continue;
      const Rational& truth = profiles[a][at];
      ExtRational before = expected_agent_cost(family.fee, truth, outcomes[a]);
      ExtRational after = expected_agent_cost(family.fee, truth, outcomes[b]);
      if (after < before) {
        report.violations.push_back(
            {{at}, profiles[a], {profiles[b][at]}, {std::move(before)}, {std::move(after)}});
      }
    }
  }
  report.sp_witness = !report.violations.empty();
  return report;
}

}  // namespace feeloc
