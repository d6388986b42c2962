#include "feeloc/solvers.hpp"

#include <algorithm>

#include "feeloc/error.hpp"

namespace feeloc {

namespace {

struct Candidate {
  Rational location;
  ExtRational value;
  ExtRational fee;
};

// Strict "a beats b": lower value, then smaller fee, then further right.
bool beats(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.fee != b.fee) return a.fee < b.fee;
  return a.location > b.location;
}

Solution single_facility(const EntranceFee& fee, const AgentProfile& profile,
                         const Candidate& best, Objective objective) {
  if (best.value.is_infinite()) {
    throw Error(ErrorKind::kInfeasible, "no finite-fee facility location");
  }
  Solution s;
  s.placement.locations = {best.location};
  s.partition = {{1, profile.size()}};
  s.value = objective_value(fee, profile, s.placement, objective);
  return s;
}

}  // namespace

Solution solve_one_tc(const EntranceFee& fee, const AgentProfile& profile) {
  const auto& x = profile.positions();
  const size_t n = x.size();
  const Rational lo = optimal_location(fee, x.front()).x_star;
  const Rational hi = optimal_location(fee, x.back()).x_star;

  std::vector<Rational> cuts{lo};
  for (const auto& p : x) {
    if (lo < p && p < hi && p != cuts.back()) cuts.push_back(p);
  }
  if (hi != lo) cuts.push_back(hi);

  // On [s, t] with no agent strictly inside, the k agents at or left of s
  // contribute l - x_i and the rest contribute x_i - l:
  //   TC(l) = n e(l) + (2k - n) l + (sum_{i>k} x_i - sum_{i<=k} x_i).
  std::vector<Rational> prefix(n + 1);
  for (size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];

  Candidate best{hi, ExtRational::infinity(), ExtRational::infinity()};
  const size_t segments = cuts.size() == 1 ? 1 : cuts.size() - 1;
  for (size_t t = 0; t < segments; ++t) {
    const Rational& s = cuts[t];
    const Rational& e = cuts.size() == 1 ? cuts[0] : cuts[t + 1];
    const size_t k = static_cast<size_t>(
        std::upper_bound(x.begin(), x.end(), s) - x.begin());
    const Rational offset = (prefix[n] - prefix[k]) - prefix[k];
    const long slope = 2 * static_cast<long>(k) - static_cast<long>(n);
    AffineMin m = min_affine(fee, static_cast<long>(n), slope, s, e);
    if (m.value.is_infinite()) continue;
    Candidate c{m.location, m.value + ExtRational(offset), fee(m.location)};
    if (beats(c, best)) best = std::move(c);
  }
  return single_facility(fee, profile, best, Objective::kTotalCost);
}

Solution solve_one_mc(const EntranceFee& fee, const AgentProfile& profile) {
  const Rational& first = profile.positions().front();
  const Rational& last = profile.positions().back();
  const Rational lo = optimal_location(fee, first).x_star;
  const Rational hi = optimal_location(fee, last).x_star;
  const Rational mid = (first + last) / 2;

  Candidate best{hi, ExtRational::infinity(), ExtRational::infinity()};
  auto scan = [&](const Rational& a, const Rational& b, long slope,
                  const Rational& offset) {
    if (b < a) return;
    AffineMin m = min_affine(fee, 1, slope, a, b);
    if (m.value.is_infinite()) return;
    Candidate c{m.location, m.value + ExtRational(offset), fee(m.location)};
    if (beats(c, best)) best = std::move(c);
  };
  // Left of the midpoint the far agent is the last one, right of it the first.
  scan(lo, std::min(mid, hi), -1, last);
  scan(std::max(mid, lo), hi, +1, Rational(-first));
  return single_facility(fee, profile, best, Objective::kMaxCost);
}

Solution solve_one(const EntranceFee& fee, const AgentProfile& profile,
                   Objective objective) {
  return objective == Objective::kTotalCost ? solve_one_tc(fee, profile)
                                            : solve_one_mc(fee, profile);
}

Solution group_opt(const EntranceFee& fee, const AgentProfile& profile,
                   size_t i, size_t j, Objective objective) {
  if (i < 1 || i > j || j > profile.size()) {
    throw Error(ErrorKind::kBadRange, "group [" + std::to_string(i) + ", " +
                                          std::to_string(j) +
                                          "] outside 1.." +
                                          std::to_string(profile.size()));
  }
  Solution s = solve_one(fee, profile.slice(i - 1, j - 1), objective);
  s.partition = {{i, j}};
  return s;
}

namespace {

ExtRational combine(const ExtRational& a, const ExtRational& b,
                    Objective objective) {
  return objective == Objective::kTotalCost ? a + b : max(a, b);
}

Solution assemble(const EntranceFee& fee, const AgentProfile& profile,
                  size_t m, Objective objective,
                  std::vector<std::pair<size_t, size_t>> partition,
                  std::vector<Rational> locations) {
  Solution s;
  s.partition = std::move(partition);
  s.placement.locations = std::move(locations);
  while (s.placement.size() < m) {
    s.placement.locations.push_back(s.placement.locations.back());
  }
  s.value = objective_value(fee, profile, s.placement, objective);
  return s;
}

}  // namespace

Solution solve_multi(const EntranceFee& fee, const AgentProfile& profile,
                     size_t m, Objective objective) {
  if (m == 0) throw Error(ErrorKind::kBadParams, "need at least one facility");
  const size_t n = profile.size();
  const size_t groups = std::min(m, n);

  // v[i][j]: one facility for agents i..j (1-based).
  std::vector<std::vector<Solution>> v(n + 1, std::vector<Solution>(n + 1));
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = i; j <= n; ++j) v[i][j] = group_opt(fee, profile, i, j, objective);
  }

  // best[k][i][j]: agents 1..j in exactly k groups, the k-th group starting
  // at or before i and ending at j. Either agent i-1 also belongs to the
  // k-th group, or the k-th group is exactly i..j.
  const ExtRational inf = ExtRational::infinity();
  auto idx = [n](size_t i, size_t j) { return i * (n + 1) + j; };
  std::vector<std::vector<ExtRational>> best(
      groups + 1, std::vector<ExtRational>((n + 1) * (n + 1), inf));
  std::vector<std::vector<char>> extends(
      groups + 1, std::vector<char>((n + 1) * (n + 1), 0));
  best[0][idx(0, 0)] = ExtRational(0);

  for (size_t k = 1; k <= groups; ++k) {
    for (size_t j = 1; j <= n; ++j) {
      for (size_t i = 1; i <= j; ++i) {
        const ExtRational& earlier = best[k][idx(i - 1, j)];
        const ExtRational& before = best[k - 1][idx(i - 1, i - 1)];
        ExtRational here =
            before.is_infinite() ? inf : combine(before, v[i][j].value, objective);
        // Ties extend the group leftwards, so recovery takes the leftmost
        // split at every step.
        if (earlier.is_finite() && earlier <= here) {
          best[k][idx(i, j)] = earlier;
          extends[k][idx(i, j)] = 1;
        } else {
          best[k][idx(i, j)] = std::move(here);
        }
      }
    }
  }
  if (best[groups][idx(n, n)].is_infinite()) {
    throw Error(ErrorKind::kInfeasible, "no feasible placement");
  }

  std::vector<std::pair<size_t, size_t>> partition;
  std::vector<Rational> locations;
  size_t i = n, j = n, k = groups;
  while (k > 0) {
    if (extends[k][idx(i, j)]) {
      --i;
      continue;
    }
    partition.emplace_back(i, j);
    locations.push_back(v[i][j].placement.locations.front());
    j = i - 1;
    i = j;
    --k;
  }
  std::reverse(partition.begin(), partition.end());
  std::reverse(locations.begin(), locations.end());
  Solution s = assemble(fee, profile, m, objective, std::move(partition),
                        std::move(locations));
  if (s.value != best[groups][idx(n, n)]) {
    // A boundary agent may switch facility, but only at equal cost.
    throw std::logic_error("group assignment disagrees with free choice");
  }
  return s;
}

namespace {

// Scans every breakpoint, override, agent position and the midpoint of the
// extreme agents; no pruning and no reliance on min_affine.
Candidate dense_group(const EntranceFee& fee, std::span<const Rational> agents,
                      Objective objective) {
  std::vector<Rational> pts = fee.special_points();
  pts.insert(pts.end(), agents.begin(), agents.end());
  pts.push_back((agents.front() + agents.back()) / 2);

  Candidate best{agents.back(), ExtRational::infinity(), ExtRational::infinity()};
  for (const auto& l : pts) {
    const ExtRational f = fee(l);
    if (f.is_infinite()) continue;
    ExtRational value;
    for (const auto& x : agents) {
      ExtRational c = ExtRational(abs(Rational(x - l))) + f;
      value = objective == Objective::kTotalCost ? value + c : max(value, c);
    }
    Candidate c{l, std::move(value), f};
    if (beats(c, best)) best = std::move(c);
  }
  return best;
}

}  // namespace

Solution brute_force_opt(const EntranceFee& fee, const AgentProfile& profile,
                         size_t m, Objective objective, size_t limit) {
  const size_t n = profile.size();
  if (n > limit) {
    throw Error(ErrorKind::kTooLarge, "brute force limited to " +
                                          std::to_string(limit) + " agents");
  }
  if (m == 0) throw Error(ErrorKind::kBadParams, "need at least one facility");
  const size_t groups = std::min(m, n);
  const auto& x = profile.positions();

  std::vector<std::vector<Candidate>> cache(n, std::vector<Candidate>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      cache[i][j] = dense_group(
          fee, std::span<const Rational>(x).subspan(i, j - i + 1), objective);
    }
  }

  // Bit g of `cuts` set means a new group starts at agent g + 1.
  bool have = false;
  ExtRational best_value;
  unsigned best_cuts = 0;
  for (unsigned cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    if (static_cast<size_t>(__builtin_popcount(cuts)) != groups - 1) continue;
    ExtRational value;
    size_t start = 0;
    for (size_t g = 0; g < n; ++g) {
      if (g + 1 == n || (cuts >> g) & 1u) {
        value = combine(value, cache[start][g].value, objective);
        start = g + 1;
      }
    }
    if (!have || value < best_value) {
      best_value = value;
      best_cuts = cuts;
      have = true;
    }
  }
  if (best_value.is_infinite()) {
    throw Error(ErrorKind::kInfeasible, "no feasible placement");
  }

  std::vector<std::pair<size_t, size_t>> partition;
  std::vector<Rational> locations;
  size_t start = 0;
  for (size_t g = 0; g < n; ++g) {
    if (g + 1 == n || (best_cuts >> g) & 1u) {
      partition.emplace_back(start + 1, g + 1);
      locations.push_back(cache[start][g].location);
      start = g + 1;
    }
  }
  Solution s = assemble(fee, profile, m, objective, std::move(partition),
                        std::move(locations));
  if (s.value != best_value) {
    // Free choice can only lower an agent's cost, and best_value is optimal.
    throw std::logic_error("oracle partition value disagrees with placement");
  }
  return s;
}

}  // namespace feeloc
