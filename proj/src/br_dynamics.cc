#include "refinery/br_dynamics.h"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace refinery {

namespace {

// Utility of an eps-pure choice, assembled linearly from per-action values
// (the circuit is linear in the player's own block).
EpsPoly box_value(const std::vector<EpsPoly>& u, int favored) {
  const int m = static_cast<int>(u.size());
  EpsPoly top = EpsPoly::from_coeffs({Rat(1), Rat(-(m - 1))});
  EpsPoly v = top * u[favored];
  for (int a = 0; a < m; ++a)
    if (a != favored) v += EpsPoly::eps() * u[a];
  return v;
}

EpsPoly perm_value(const std::vector<EpsPoly>& u, const std::vector<int>& perm) {
  EpsPoly v;
  for (std::size_t a = 0; a < u.size(); ++a)
    v += EpsPoly::eps(static_cast<std::size_t>(perm[a])) * u[a];
  return v;
}

std::vector<int> state_ranks(const EpsPureProfile& p, int player) {
  if (p.scheme == PerturbScheme::PerfectBox) return {p.favored[player]};
  return p.perm[player];
}

}  // namespace

std::vector<EpsPoly> action_utilities(const ConcisePotentialGame& g,
                                      const EpsPureProfile& profile, int player) {
  auto x = embed_profile(profile, profile.scheme, g.actions());
  const int m = g.actions()[player];
  const int deg = g.embed_degree(profile.scheme);
  std::vector<EpsPoly> u;
  u.reserve(m);
  for (int a = 0; a < m; ++a) {
    std::vector<EpsPoly> own(m, EpsPoly());
    own[a] = EpsPoly(Rat(1));
    x[player] = own;
    u.push_back(g.utility(player).eval_symbolic(x, deg));
  }
  return u;
}

PerfectBr symbolic_br_perfect(const ConcisePotentialGame& g,
                              const EpsPureProfile& profile, int player) {
  auto u = action_utilities(g, profile, player);
  int best = 0;
  for (std::size_t a = 1; a < u.size(); ++a)
    if (lex_greater(u[a], u[best])) best = static_cast<int>(a);
  return PerfectBr{best, box_value(u, best)};
}

ProperBr symbolic_br_proper(const ConcisePotentialGame& g,
                            const EpsPureProfile& profile, int player) {
  auto u = action_utilities(g, profile, player);
  const int m = static_cast<int>(u.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return lex_greater(u[a], u[b]);  // stable keeps lowest index first on ties
  });
  std::vector<int> perm(m);
  for (int k = 0; k < m; ++k) perm[order[k]] = k;
  return ProperBr{perm, perm_value(u, perm)};
}

DynamicsResult run_dynamics(const ConcisePotentialGame& g,
                            const EpsPureProfile& start,
                            const DynamicsConfig& cfg) {
  const int n = g.num_players();
  std::vector<int> order = cfg.player_order;
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
  }
  DynamicsResult res;
  res.final = start;
  bool moved = true;
  while (moved) {
    moved = false;
    ++res.sweeps;
    for (int player : order) {
      if (cfg.max_steps && res.steps >= *cfg.max_steps) {
        res.terminated = Termination::StepCapHit;
        return res;
      }
      auto u = action_utilities(g, res.final, player);
      if (res.final.scheme == PerturbScheme::PerfectBox) {
        int best = 0;
        for (std::size_t a = 1; a < u.size(); ++a)
          if (lex_greater(u[a], u[best])) best = static_cast<int>(a);
        EpsPoly cur = box_value(u, res.final.favored[player]);
        EpsPoly nxt = box_value(u, best);
        if (lex_greater(nxt, cur)) {
          TraceStep step{player, state_ranks(res.final, player), {best}, {}};
          res.final.favored[player] = best;
          ++res.steps;
          moved = true;
          if (cfg.trace) {
            step.potential = perturbed_potential(g, res.final, res.final.scheme);
            res.trace.push_back(std::move(step));
          }
        }
      } else {
        const int m = static_cast<int>(u.size());
        std::vector<int> idx(m);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int a, int b) { return lex_greater(u[a], u[b]); });
        std::vector<int> best(m);
        for (int k = 0; k < m; ++k) best[idx[k]] = k;
        EpsPoly cur = perm_value(u, res.final.perm[player]);
        EpsPoly nxt = perm_value(u, best);
        if (lex_greater(nxt, cur)) {
          TraceStep step{player, state_ranks(res.final, player), best, {}};
          res.final.perm[player] = best;
          ++res.steps;
          moved = true;
          if (cfg.trace) {
            step.potential = perturbed_potential(g, res.final, res.final.scheme);
            res.trace.push_back(std::move(step));
          }
        }
      }
    }
  }
  return res;
}

std::uint64_t enumeration_cap() {
  if (const char* env = std::getenv("REFINERY_ENUM_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1000000;
}

namespace {

std::uint64_t factorial(int m) {
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

bool next_permutation_profile(std::vector<std::vector<int>>& perms) {
  for (std::size_t i = perms.size(); i-- > 0;) {
    if (std::next_permutation(perms[i].begin(), perms[i].end())) return true;
    std::sort(perms[i].begin(), perms[i].end());
  }
  return false;
}

}  // namespace

EpsPureProfile solve_exhaustive(const ConcisePotentialGame& g,
                                PerturbScheme scheme,
                                std::optional<std::uint64_t> cap_opt) {
  const std::uint64_t cap = cap_opt.value_or(enumeration_cap());
  const auto& m = g.actions();
  const int n = g.num_players();
  if (scheme == PerturbScheme::PerfectBox) {
    std::uint64_t total = 1;
    for (int mi : m) {
      if (total > cap / std::max(mi, 1))
        throw EnumerationCapExceeded("solve_exhaustive: profile count over cap");
      total *= static_cast<std::uint64_t>(mi);
    }
    std::vector<int> a(n, 0);
    EpsPureProfile best = EpsPureProfile::box(a);
    EpsPoly best_val = perturbed_potential(g, best, scheme);
    for (std::uint64_t c = 1; c < total; ++c) {
      for (int i = n - 1; i >= 0; --i) {
        if (++a[i] < m[i]) break;
        a[i] = 0;
      }
      EpsPureProfile p = EpsPureProfile::box(a);
      EpsPoly v = perturbed_potential(g, p, scheme);
      if (lex_greater(v, best_val)) {
        best = std::move(p);
        best_val = std::move(v);
      }
    }
    return best;
  }
  // Permutahedron: enumerate permutation profiles when the count fits.
  std::uint64_t total = 1;
  bool fits = true;
  for (int mi : m) {
    std::uint64_t f = factorial(mi);
    if (total > cap / std::max<std::uint64_t>(f, 1)) {
      fits = false;
      break;
    }
    total *= f;
  }
  if (!fits) {
    DynamicsConfig cfg;
    cfg.scheme = scheme;
    return run_dynamics(g, EpsPureProfile::canonical(scheme, m), cfg).final;
  }
  std::vector<std::vector<int>> perms;
  for (int mi : m) {
    std::vector<int> id(mi);
    std::iota(id.begin(), id.end(), 0);
    perms.push_back(std::move(id));
  }
  EpsPureProfile best = EpsPureProfile::permutahedron(perms);
  EpsPoly best_val = perturbed_potential(g, best, scheme);
  while (next_permutation_profile(perms)) {
    EpsPureProfile p = EpsPureProfile::permutahedron(perms);
    EpsPoly v = perturbed_potential(g, p, scheme);
    if (lex_greater(v, best_val)) {
      best = std::move(p);
      best_val = std::move(v);
    }
  }
  return best;
}

}  // namespace refinery
