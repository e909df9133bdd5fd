#include "refinery/games.h"

#include <numeric>

#include "refinery/br_dynamics.h"
#include "refinery/rng.h"

namespace refinery {

EpsPureProfile EpsPureProfile::box(std::vector<int> favored) {
  EpsPureProfile p;
  p.scheme = PerturbScheme::PerfectBox;
  p.favored = std::move(favored);
  return p;
}

EpsPureProfile EpsPureProfile::permutahedron(std::vector<std::vector<int>> perm) {
  EpsPureProfile p;
  p.scheme = PerturbScheme::ProperPermutahedron;
  p.perm = std::move(perm);
  return p;
}

EpsPureProfile EpsPureProfile::canonical(PerturbScheme scheme,
                                         const std::vector<int>& actions) {
  if (scheme == PerturbScheme::PerfectBox)
    return box(std::vector<int>(actions.size(), 0));
  std::vector<std::vector<int>> perms;
  perms.reserve(actions.size());
  for (int m : actions) {
    std::vector<int> id(m);
    std::iota(id.begin(), id.end(), 0);
    perms.push_back(std::move(id));
  }
  return permutahedron(std::move(perms));
}

int EpsPureProfile::favored_action(int player) const {
  if (scheme == PerturbScheme::PerfectBox) return favored[player];
  const auto& pi = perm[player];
  for (std::size_t a = 0; a < pi.size(); ++a)
    if (pi[a] == 0) return static_cast<int>(a);
  throw SchemeMismatch("EpsPureProfile: permutation has no rank-0 action");
}

ConcisePotentialGame::ConcisePotentialGame(
    MultilinearCircuit potential,
    std::optional<std::vector<MultilinearCircuit>> utilities)
    : potential_(std::move(potential)), utilities_(std::move(utilities)) {
  if (!potential_.validated()) potential_.validate_multilinear();
  if (utilities_) {
    if (utilities_->size() != static_cast<std::size_t>(num_players()))
      throw DimensionMismatch("game: one utility circuit per player required");
    for (auto& u : *utilities_)
      if (!u.validated()) u.validate_multilinear();
  }
}

const MultilinearCircuit& ConcisePotentialGame::utility(int player) const {
  if (utilities_) return (*utilities_)[player];
  return potential_;
}

int ConcisePotentialGame::embed_degree(PerturbScheme scheme) const {
  if (scheme == PerturbScheme::PerfectBox) return 1;
  int d = 0;
  for (int m : actions()) d = std::max(d, m - 1);
  return d;
}

std::vector<std::vector<EpsPoly>> embed_profile(const EpsPureProfile& p,
                                                PerturbScheme scheme,
                                                const std::vector<int>& actions) {
  if (p.scheme != scheme)
    throw SchemeMismatch("embed_profile: profile built for a different scheme");
  const std::size_t n = actions.size();
  std::vector<std::vector<EpsPoly>> x(n);
  if (scheme == PerturbScheme::PerfectBox) {
    if (p.favored.size() != n)
      throw SchemeMismatch("embed_profile: favored list has wrong length");
    for (std::size_t i = 0; i < n; ++i) {
      const int m = actions[i];
      if (p.favored[i] < 0 || p.favored[i] >= m)
        throw SchemeMismatch("embed_profile: favored action out of range");
      // favored -> 1-(m-1)eps, others -> eps
      EpsPoly top = EpsPoly::from_coeffs({Rat(1), Rat(-(m - 1))});
      for (int a = 0; a < m; ++a)
        x[i].push_back(a == p.favored[i] ? top : EpsPoly::eps());
    }
  } else {
    if (p.perm.size() != n)
      throw SchemeMismatch("embed_profile: permutation list has wrong length");
    for (std::size_t i = 0; i < n; ++i) {
      const int m = actions[i];
      const auto& pi = p.perm[i];
      if (static_cast<int>(pi.size()) != m)
        throw SchemeMismatch("embed_profile: permutation has wrong length");
      std::vector<bool> seen(m, false);
      for (int r : pi) {
        if (r < 0 || r >= m || seen[r])
          throw SchemeMismatch("embed_profile: not a permutation");
        seen[r] = true;
      }
      for (int a = 0; a < m; ++a)
        x[i].push_back(EpsPoly::eps(static_cast<std::size_t>(pi[a])));
    }
  }
  return x;
}

EpsPoly perturbed_potential(const ConcisePotentialGame& g,
                            const EpsPureProfile& p, PerturbScheme scheme) {
  auto x = embed_profile(p, scheme, g.actions());
  return g.potential().eval_symbolic(x, g.embed_degree(scheme));
}

EpsPoly perturbed_utility(const ConcisePotentialGame& g, int player,
                          const std::vector<EpsPoly>& own,
                          const EpsPureProfile& others, PerturbScheme scheme) {
  auto x = embed_profile(others, scheme, g.actions());
  x[player] = own;
  int deg = g.embed_degree(scheme);
  for (const EpsPoly& q : own) deg = std::max(deg, q.degree());
  return g.utility(player).eval_symbolic(x, deg);
}

std::vector<std::vector<Rat>> one_hot_profile(const std::vector<int>& actions,
                                              const std::vector<int>& profile) {
  std::vector<std::vector<Rat>> x(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    x[i].assign(actions[i], Rat(0));
    x[i][profile[i]] = Rat(1);
  }
  return x;
}

std::size_t TableGame::num_cells() const {
  std::size_t c = 1;
  for (int m : actions) c *= static_cast<std::size_t>(m);
  return c;
}

std::size_t TableGame::cell_index(const std::vector<int>& profile) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < actions.size(); ++i)
    idx = idx * static_cast<std::size_t>(actions[i]) +
          static_cast<std::size_t>(profile[i]);
  return idx;
}

Rat TableGame::utility(int player, const std::vector<int>& profile) const {
  return utilities[player][cell_index(profile)];
}

bool TableGame::identical_interest() const {
  for (std::size_t p = 1; p < utilities.size(); ++p)
    if (utilities[p] != utilities[0]) return false;
  return true;
}

TableGame TableGame::identical(std::vector<int> actions, std::vector<Rat> common) {
  TableGame g;
  g.actions = std::move(actions);
  g.utilities.assign(g.actions.size(), common);
  g.potential = std::move(common);
  return g;
}

ConcisePotentialGame TableGame::to_concise() const {
  std::vector<Rat> phi;
  if (potential) {
    phi = *potential;
  } else if (identical_interest()) {
    phi = utilities[0];
  } else {
    auto derived = derive_potential(*this);
    if (!derived)
      throw DimensionMismatch("TableGame: no potential exists for this game");
    phi = *derived;
  }
  std::vector<MultilinearCircuit> utils;
  for (const auto& table : utilities)
    utils.push_back(MultilinearCircuit::from_tensor(actions, table));
  return ConcisePotentialGame(MultilinearCircuit::from_tensor(actions, phi),
                              std::move(utils));
}

std::optional<std::vector<Rat>> derive_potential(const TableGame& g) {
  const std::size_t cells = g.num_cells();
  const int n = g.num_players();
  std::vector<std::optional<Rat>> phi(cells);
  phi[0] = Rat(0);
  // BFS over single-player deviations, integrating utility differences.
  std::vector<std::size_t> queue{0};
  std::vector<std::size_t> strides(n, 1);
  for (int p = n - 2; p >= 0; --p)
    strides[p] = strides[p + 1] * static_cast<std::size_t>(g.actions[p + 1]);
  auto decode = [&](std::size_t cell) {
    std::vector<int> prof(n);
    for (int p = 0; p < n; ++p) {
      prof[p] = static_cast<int>(cell / strides[p]);
      cell %= strides[p];
    }
    return prof;
  };
  while (!queue.empty()) {
    std::size_t cell = queue.back();
    queue.pop_back();
    std::vector<int> prof = decode(cell);
    for (int p = 0; p < n; ++p) {
      const int orig = prof[p];
      const Rat u_old = g.utility(p, prof);
      for (int a = 0; a < g.actions[p]; ++a) {
        if (a == orig) continue;
        prof[p] = a;
        std::size_t other = g.cell_index(prof);
        Rat val = *phi[cell] + g.utility(p, prof) - u_old;
        if (!phi[other]) {
          phi[other] = val;
          queue.push_back(other);
        } else if (*phi[other] != val) {
          return std::nullopt;
        }
      }
      prof[p] = orig;
    }
  }
  std::vector<Rat> out(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    if (!phi[c]) return std::nullopt;
    out[c] = *phi[c];
  }
  return out;
}

TableGame materialize_table(const ConcisePotentialGame& g, std::uint64_t cap) {
  const int n = g.num_players();
  const auto& m = g.actions();
  std::uint64_t cells = 1;
  for (int mi : m) {
    if (cells > cap / std::max(mi, 1))
      throw EnumerationCapExceeded("materialize_table: profile count over cap");
    cells *= static_cast<std::uint64_t>(mi);
  }
  TableGame t;
  t.actions = m;
  t.utilities.assign(n, std::vector<Rat>(cells));
  std::vector<Rat> phi(cells);
  std::vector<int> prof(n, 0);
  for (std::uint64_t c = 0; c < cells; ++c) {
    auto x = one_hot_profile(m, prof);
    phi[c] = g.potential().eval_rational(x);
    for (int i = 0; i < n; ++i)
      t.utilities[i][c] =
          g.has_utilities() ? g.utility(i).eval_rational(x) : phi[c];
    for (int i = n - 1; i >= 0; --i) {
      if (++prof[i] < m[i]) break;
      prof[i] = 0;
    }
  }
  t.potential = std::move(phi);
  return t;
}

PotentialPropertyResult check_potential_property(const ConcisePotentialGame& g,
                                                 int trials,
                                                 std::uint64_t seed) {
  PotentialPropertyResult res;
  if (!g.has_utilities()) return res;  // identical-interest view is trivially exact
  Rng rng(seed);
  const auto& m = g.actions();
  const int n = g.num_players();
  for (int t = 0; t < trials; ++t) {
    std::vector<int> a(n);
    for (int i = 0; i < n; ++i) a[i] = static_cast<int>(rng.below(m[i]));
    int player = static_cast<int>(rng.below(n));
    if (m[player] < 2) continue;
    int dev = static_cast<int>(rng.below(m[player]));
    if (dev == a[player]) dev = (dev + 1) % m[player];
    std::vector<int> b = a;
    b[player] = dev;
    auto xa = one_hot_profile(m, a);
    auto xb = one_hot_profile(m, b);
    Rat dphi = g.potential().eval_rational(xb) - g.potential().eval_rational(xa);
    Rat du = g.utility(player).eval_rational(xb) - g.utility(player).eval_rational(xa);
    if (dphi != du) {
      res.pass = false;
      res.profile = a;
      res.player = player;
      res.deviation = dev;
      return res;
    }
  }
  return res;
}

}  // namespace refinery
