#include "refinery/oracles.h"

#include <algorithm>
#include <numeric>

#include "refinery/linalg.h"

namespace refinery {

Rat expected_utility_bruteforce(const TableGame& g, int player, int action,
                                const std::vector<std::vector<Rat>>& x) {
  const int n = g.num_players();
  std::vector<int> prof(n, 0);
  prof[player] = action;
  Rat total(0);
  while (true) {
    Rat w(1);
    for (int i = 0; i < n; ++i)
      if (i != player) w *= x[i][prof[i]];
    total += w * g.utility(player, prof);
    int i = n - 1;
    for (; i >= 0; --i) {
      if (i == player) continue;
      if (++prof[i] < g.actions[i]) break;
      prof[i] = 0;
    }
    if (i < 0) break;
  }
  return total;
}

namespace {

void require_fully_mixed(const std::vector<int>& actions,
                         const NumericProfile& p) {
  if (p.x.size() != actions.size())
    throw NotFullyMixed("profile has wrong player count");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (p.x[i].size() != static_cast<std::size_t>(actions[i]))
      throw NotFullyMixed("profile has wrong action count");
    Rat sum(0);
    for (const Rat& v : p.x[i]) {
      if (v.sign() <= 0) throw NotFullyMixed("profile not fully mixed");
      sum += v;
    }
    if (sum != Rat(1)) throw NotFullyMixed("profile rows must sum to 1");
  }
}

CheckResult check_pairs(const std::vector<int>& actions,
                        const ExpectedUtilityFn& u, const NumericProfile& p,
                        bool proper) {
  require_fully_mixed(actions, p);
  CheckResult res;
  res.eps_used = p.eps;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    std::vector<Rat> ui(actions[i]);
    for (int a = 0; a < actions[i]; ++a) ui[a] = u(static_cast<int>(i), a);
    for (int a = 0; a < actions[i]; ++a)
      for (int b = 0; b < actions[i]; ++b) {
        if (a == b || !(ui[a] < ui[b])) continue;
        Rat bound = proper ? p.eps * p.x[i][b] : p.eps;
        if (p.x[i][a] > bound) {
          res.pass = false;
          res.player = static_cast<int>(i);
          res.action = a;
          res.better = b;
          return res;
        }
      }
  }
  return res;
}

}  // namespace

CheckResult check_eps_perfect_fn(const std::vector<int>& actions,
                                 const ExpectedUtilityFn& u,
                                 const NumericProfile& p) {
  return check_pairs(actions, u, p, false);
}

CheckResult check_eps_proper_fn(const std::vector<int>& actions,
                                const ExpectedUtilityFn& u,
                                const NumericProfile& p) {
  return check_pairs(actions, u, p, true);
}

CheckResult check_eps_perfect(const TableGame& g, const NumericProfile& p) {
  return check_eps_perfect_fn(
      g.actions,
      [&](int i, int a) { return expected_utility_bruteforce(g, i, a, p.x); }, p);
}

CheckResult check_eps_proper(const TableGame& g, const NumericProfile& p) {
  return check_eps_proper_fn(
      g.actions,
      [&](int i, int a) { return expected_utility_bruteforce(g, i, a, p.x); }, p);
}

NumericProfile embed_numeric(const EpsPureProfile& p, PerturbScheme scheme,
                             const std::vector<int>& actions, const Rat& eps) {
  NumericProfile out;
  out.eps = eps;
  auto sym = embed_profile(p, scheme, actions);
  for (std::size_t i = 0; i < sym.size(); ++i) {
    std::vector<Rat> row;
    Rat sum(0);
    for (const EpsPoly& q : sym[i]) {
      row.push_back(q.eval(eps));
      sum += row.back();
    }
    if (scheme == PerturbScheme::ProperPermutahedron)
      for (Rat& v : row) v /= sum;  // drop-normalization undone numerically
    out.x.push_back(std::move(row));
  }
  return out;
}

KmResponse brute_proper_br(const std::vector<std::vector<Rat>>& vertices,
                           const std::vector<Rat>& u, const Rat& eps) {
  if (vertices.size() > (1u << 20))
    throw TooManyVertices("brute_proper_br: too many vertices");
  KmResponse res;
  const std::size_t n = vertices.size();
  std::vector<Rat> value(n, Rat(0));
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t c = 0; c < u.size(); ++c)
      value[v] += u[c] * vertices[v][c];
  res.order.resize(n);
  std::iota(res.order.begin(), res.order.end(), std::size_t{0});
  std::stable_sort(res.order.begin(), res.order.end(),
                   [&](std::size_t a, std::size_t b) { return value[b] < value[a]; });
  const std::size_t dim = u.size();
  // Coefficient of eps^i in coordinate c is the c-th entry of the i-th best
  // vertex; assembled directly to stay linear in the vertex count.
  std::vector<std::vector<Rat>> coeffs(dim, std::vector<Rat>(n, Rat(0)));
  res.point_numeric.assign(dim, Rat(0));
  Rat epow(1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = vertices[res.order[i]];
    for (std::size_t c = 0; c < dim; ++c) {
      if (!v[c].is_zero()) {
        coeffs[c][i] = v[c];
        res.point_numeric[c] += v[c] * epow;
      }
    }
    epow *= eps;
  }
  for (std::size_t c = 0; c < dim; ++c)
    res.point.push_back(EpsPoly::from_coeffs(std::move(coeffs[c])));
  return res;
}

int leading_exponent(const EpsPoly& p) {
  for (int i = 0; i <= p.degree(); ++i)
    if (!p.coeff(i).is_zero()) return i;
  return -1;
}

namespace {

// Embedding weight polynomial of one player's action.
EpsPoly embed_weight(PerturbScheme scheme, int m, int favored_or_rank, int a,
                     const std::vector<int>* perm) {
  if (scheme == PerturbScheme::PerfectBox) {
    if (a == favored_or_rank)
      return EpsPoly::from_coeffs({Rat(1), Rat(-(m - 1))});
    return EpsPoly::eps();
  }
  return EpsPoly::eps(static_cast<std::size_t>((*perm)[a]));
}

Rat table_potential(const TableGame& g, const std::vector<int>& prof) {
  if (g.potential) return (*g.potential)[g.cell_index(prof)];
  return g.utility(0, prof);  // identical interest
}

}  // namespace

EpsPoly brute_perturbed_potential(const TableGame& g, const EpsPureProfile& p,
                                  PerturbScheme scheme) {
  const int n = g.num_players();
  std::vector<int> prof(n, 0);
  EpsPoly total;
  while (true) {
    EpsPoly w(Rat(1));
    for (int i = 0; i < n; ++i) {
      const std::vector<int>* perm =
          scheme == PerturbScheme::ProperPermutahedron ? &p.perm[i] : nullptr;
      int fav = scheme == PerturbScheme::PerfectBox ? p.favored[i] : 0;
      w = w * embed_weight(scheme, g.actions[i], fav, prof[i], perm);
    }
    total += table_potential(g, prof) * w;
    int i = n - 1;
    for (; i >= 0; --i) {
      if (++prof[i] < g.actions[i]) break;
      prof[i] = 0;
    }
    if (i < 0) break;
  }
  return total;
}

EpsPureProfile brute_max_perturbed_potential(const TableGame& g,
                                             PerturbScheme scheme,
                                             std::uint64_t cap) {
  const int n = g.num_players();
  if (scheme == PerturbScheme::PerfectBox) {
    std::uint64_t total = 1;
    for (int m : g.actions) {
      if (total > cap / std::max(m, 1))
        throw EnumerationCapExceeded("brute_max: over cap");
      total *= static_cast<std::uint64_t>(m);
    }
    std::vector<int> a(n, 0);
    EpsPureProfile best = EpsPureProfile::box(a);
    EpsPoly best_val = brute_perturbed_potential(g, best, scheme);
    for (std::uint64_t c = 1; c < total; ++c) {
      for (int i = n - 1; i >= 0; --i) {
        if (++a[i] < g.actions[i]) break;
        a[i] = 0;
      }
      EpsPureProfile p = EpsPureProfile::box(a);
      EpsPoly v = brute_perturbed_potential(g, p, scheme);
      if (lex_greater(v, best_val)) {
        best = std::move(p);
        best_val = std::move(v);
      }
    }
    return best;
  }
  std::vector<std::vector<int>> perms;
  std::uint64_t total = 1;
  for (int m : g.actions) {
    std::uint64_t f = 1;
    for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
    if (total > cap / std::max<std::uint64_t>(f, 1))
      throw EnumerationCapExceeded("brute_max: over cap");
    total *= f;
    std::vector<int> id(m);
    std::iota(id.begin(), id.end(), 0);
    perms.push_back(std::move(id));
  }
  EpsPureProfile best = EpsPureProfile::permutahedron(perms);
  EpsPoly best_val = brute_perturbed_potential(g, best, scheme);
  while (true) {
    bool advanced = false;
    for (std::size_t i = perms.size(); i-- > 0;) {
      if (std::next_permutation(perms[i].begin(), perms[i].end())) {
        advanced = true;
        break;
      }
      std::sort(perms[i].begin(), perms[i].end());
    }
    if (!advanced) break;
    EpsPureProfile p = EpsPureProfile::permutahedron(perms);
    EpsPoly v = brute_perturbed_potential(g, p, scheme);
    if (lex_greater(v, best_val)) {
      best = std::move(p);
      best_val = std::move(v);
    }
  }
  return best;
}

ProperBrCertificate certify_proper_br(
    const std::vector<std::vector<Rat>>& vertices, const std::vector<Rat>& u,
    const std::vector<std::vector<Rat>>& sorted_spanning,
    const std::vector<Rat>& point, const Rat& eps_hat) {
  ProperBrCertificate cert;
  const std::size_t nv = vertices.size();
  const std::size_t dim = u.size();
  auto value_of = [&](const std::vector<Rat>& v) {
    Rat s(0);
    for (std::size_t c = 0; c < dim; ++c) s += u[c] * v[c];
    return s;
  };
  std::vector<Rat> vval(nv);
  for (std::size_t i = 0; i < nv; ++i) vval[i] = value_of(vertices[i]);
  std::vector<Rat> bval(sorted_spanning.size());
  for (std::size_t i = 0; i < sorted_spanning.size(); ++i)
    bval[i] = value_of(sorted_spanning[i]);

  // Utility classes of all vertices, descending.
  std::vector<Rat> classes = vval;
  std::sort(classes.begin(), classes.end(), [](const Rat& a, const Rat& b) { return b < a; });
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  auto class_of = [&](const Rat& v) {
    return static_cast<std::size_t>(
        std::find(classes.begin(), classes.end(), v) - classes.begin());
  };

  // Map spanning members onto vertex ids; every member must be a vertex.
  std::vector<std::size_t> member_vertex(sorted_spanning.size());
  for (std::size_t i = 0; i < sorted_spanning.size(); ++i) {
    auto it = std::find(vertices.begin(), vertices.end(), sorted_spanning[i]);
    if (it == vertices.end()) {
      cert.reason = "spanning member is not a polytope vertex";
      return cert;
    }
    member_vertex[i] = static_cast<std::size_t>(it - vertices.begin());
  }

  // Affine decomposition of every non-member vertex over its weakly better
  // spanning prefix, and the coefficient magnitude bound.
  std::vector<bool> is_member(nv, false);
  for (std::size_t m : member_vertex) is_member[m] = true;
  struct Decomp {
    std::size_t last;  // i(v): last spanning index with value >= vertex value
    Vec coeff;
  };
  std::vector<std::optional<Decomp>> decomp(nv);
  Rat cmax(1);
  for (std::size_t v = 0; v < nv; ++v) {
    if (is_member[v]) continue;
    std::size_t last = sorted_spanning.size();
    for (std::size_t i = 0; i < sorted_spanning.size(); ++i)
      if (!(bval[i] < vval[v])) last = i;
    if (last == sorted_spanning.size()) {
      cert.reason = "vertex better than every spanning member";
      return cert;
    }
    std::vector<Vec> prefix(sorted_spanning.begin(),
                            sorted_spanning.begin() + last + 1);
    auto c = affine_coordinates(prefix, vertices[v]);
    if (!c) {
      cert.reason = "vertex outside the affine hull of weakly better members";
      return cert;
    }
    Rat mag(0);
    for (const Rat& ci : *c) mag += ci.abs();
    cmax = max(cmax, mag);
    decomp[v] = Decomp{last, std::move(*c)};
  }

  // Scale so the corrections cannot flip signs: lambda is divided by the
  // smallest power of two above 4 * n * Cmax.
  Rat d_scale(1);
  Rat target = Rat(4) * Rat(static_cast<long>(nv)) * cmax;
  while (d_scale < target) d_scale *= Rat(2);

  for (int denom_pow = 1; denom_pow <= 6; ++denom_pow) {
    // ratio = (2^k - 1) / 2^k for k = 1..6: 1/2, 3/4, 7/8, ...
    Rat ratio = (Rat::pow2(denom_pow) - Rat(1)) / Rat::pow2(denom_pow);
    // Base masses on the spanning members.
    std::vector<Rat> mu(nv, Rat(0));
    Rat top(1), epow(1);
    for (std::size_t i = 1; i < sorted_spanning.size(); ++i) {
      epow *= eps_hat;
      mu[member_vertex[i]] += epow;
      top -= epow;
    }
    mu[member_vertex[0]] += top;
    // Lemma-style lambda for every non-member: eps_hat^{i(v)} ratio^{r+1}/D,
    // r the class distance to the governing member within its gap.
    bool ok = true;
    for (std::size_t v = 0; v < nv && ok; ++v) {
      if (is_member[v]) continue;
      const auto& d = *decomp[v];
      std::size_t gap_rank = class_of(vval[v]) - class_of(bval[d.last]);
      Rat lam(1);
      for (std::size_t i = 0; i < d.last; ++i) lam *= eps_hat;
      for (std::size_t r = 0; r <= gap_rank; ++r) lam *= ratio;
      lam /= d_scale;
      mu[v] += lam;
      for (std::size_t i = 0; i <= d.last; ++i)
        mu[member_vertex[i]] -= lam * d.coeff[i];
    }
    // Exact checks: normalization, expectation, positivity, dominance.
    Rat sum(0);
    for (const Rat& m : mu) sum += m;
    if (sum != Rat(1)) {
      cert.reason = "certificate masses do not sum to 1";
      return cert;
    }
    for (std::size_t c = 0; c < dim; ++c) {
      Rat e(0);
      for (std::size_t v = 0; v < nv; ++v) e += mu[v] * vertices[v][c];
      if (e != point[c]) {
        cert.reason = "certificate expectation does not match the point";
        return cert;
      }
    }
    for (std::size_t v = 0; v < nv && ok; ++v)
      if (mu[v].sign() <= 0) ok = false;
    if (ok) {
      // max of each class <= ratio * min of the previous class.
      std::vector<std::optional<Rat>> cls_min(classes.size()), cls_max(classes.size());
      for (std::size_t v = 0; v < nv; ++v) {
        std::size_t c = class_of(vval[v]);
        cls_min[c] = cls_min[c] ? min(*cls_min[c], mu[v]) : mu[v];
        cls_max[c] = cls_max[c] ? max(*cls_max[c], mu[v]) : mu[v];
      }
      for (std::size_t c = 0; c + 1 < classes.size() && ok; ++c) {
        if (!cls_min[c] || !cls_max[c + 1]) continue;
        if (*cls_max[c + 1] > ratio * *cls_min[c]) ok = false;
      }
    }
    if (ok) {
      cert.pass = true;
      cert.ratio = ratio;
      return cert;
    }
  }
  cert.reason = "no ratio in the menu certified positivity and dominance";
  return cert;
}

// --- MaxCut structured evaluators ------------------------------------------

namespace {

Rat majority_prob(const Rat& p1, const Rat& p2, const Rat& p3) {
  return p1 * p2 + p1 * p3 + p2 * p3 - Rat(2) * p1 * p2 * p3;
}

Rat non_unanimity_prob(const Rat& p1, const Rat& p2, const Rat& p3) {
  Rat all_b = p1 * p2 * p3;
  Rat all_c = (Rat(1) - p1) * (Rat(1) - p2) * (Rat(1) - p3);
  return Rat(1) - all_b - all_c;
}

}  // namespace

Rat maxcut_triplet_expected_utility(const WeightedGraph& g,
                                    const std::vector<Rat>& b_prob) {
  const int nv = g.num_vertices;
  std::vector<Rat> maj(nv), nu(nv);
  for (int v = 0; v < nv; ++v) {
    maj[v] = majority_prob(b_prob[3 * v], b_prob[3 * v + 1], b_prob[3 * v + 2]);
    nu[v] = non_unanimity_prob(b_prob[3 * v], b_prob[3 * v + 1], b_prob[3 * v + 2]);
  }
  Rat cut(0);
  for (const auto& [u, v, w] : g.edges)
    cut += Rat(w) * (maj[u] + maj[v] - Rat(2) * maj[u] * maj[v]);
  // E[psi 1{psi>=2}] = sum q_v (1 - prod_{u != v} (1 - q_u))
  std::vector<Rat> pre(nv + 1, Rat(1)), suf(nv + 1, Rat(1));
  for (int v = 0; v < nv; ++v) pre[v + 1] = pre[v] * (Rat(1) - nu[v]);
  for (int v = nv; v-- > 0;) suf[v] = (Rat(1) - nu[v]) * suf[v + 1];
  Rat penalty(0);
  for (int v = 0; v < nv; ++v)
    penalty += nu[v] * (Rat(1) - pre[v] * suf[v + 1]);
  return cut - penalty / Rat(maxcut_lambda(g));
}

EpsPoly maxcut_triplet_perturbed_potential(const WeightedGraph& g,
                                           const std::vector<int>& favored) {
  const int nv = g.num_vertices;
  EpsPoly one(Rat(1));
  auto b_of = [&](int p) {
    // P(play b) = 1-eps if favoring b (action 0) else eps.
    return favored[p] == 0 ? one - EpsPoly::eps() : EpsPoly::eps();
  };
  std::vector<EpsPoly> maj(nv), nu(nv);
  for (int v = 0; v < nv; ++v) {
    EpsPoly p1 = b_of(3 * v), p2 = b_of(3 * v + 1), p3 = b_of(3 * v + 2);
    maj[v] = p1 * p2 + p1 * p3 + p2 * p3 - Rat(2) * (p1 * p2 * p3);
    EpsPoly all_b = p1 * p2 * p3;
    EpsPoly all_c = (one - p1) * (one - p2) * (one - p3);
    nu[v] = one - all_b - all_c;
  }
  EpsPoly cut;
  for (const auto& [u, v, w] : g.edges)
    cut += Rat(w) * (maj[u] + maj[v] - Rat(2) * (maj[u] * maj[v]));
  std::vector<EpsPoly> pre(nv + 1, one), suf(nv + 1, one);
  for (int v = 0; v < nv; ++v) pre[v + 1] = pre[v] * (one - nu[v]);
  for (int v = nv; v-- > 0;) suf[v] = (one - nu[v]) * suf[v + 1];
  EpsPoly penalty;
  for (int v = 0; v < nv; ++v)
    penalty += nu[v] * (one - pre[v] * suf[v + 1]);
  return cut - Rat(1, maxcut_lambda(g)) * penalty;
}

std::vector<int> maxcut_majority_cut(const WeightedGraph& g,
                                     const std::vector<int>& favored) {
  std::vector<int> side(g.num_vertices, 0);
  for (int v = 0; v < g.num_vertices; ++v) {
    int votes_b = 0;
    for (int k = 0; k < 3; ++k)
      if (favored[3 * v + k] == 0) ++votes_b;
    side[v] = votes_b >= 2 ? 0 : 1;
  }
  return side;
}

Rat cut_weight(const WeightedGraph& g, const std::vector<int>& side) {
  Rat w(0);
  for (const auto& [u, v, wt] : g.edges)
    if (side[u] != side[v]) w += Rat(wt);
  return w;
}

bool is_flip_local_optimal(const WeightedGraph& g, const std::vector<int>& side) {
  Rat base = cut_weight(g, side);
  std::vector<int> flip = side;
  for (int v = 0; v < g.num_vertices; ++v) {
    flip[v] ^= 1;
    if (cut_weight(g, flip) > base) return false;
    flip[v] ^= 1;
  }
  return true;
}

Rat maxcut_triplet_pure_utility(const WeightedGraph& g,
                                const std::vector<int>& favored) {
  auto side = maxcut_majority_cut(g, favored);
  Rat w = cut_weight(g, side);
  int psi = 0;
  for (int v = 0; v < g.num_vertices; ++v) {
    int votes_b = 0;
    for (int k = 0; k < 3; ++k)
      if (favored[3 * v + k] == 0) ++votes_b;
    if (votes_b != 0 && votes_b != 3) ++psi;
  }
  if (psi >= 2) w -= Rat(psi, maxcut_lambda(g));
  return w;
}

}  // namespace refinery
